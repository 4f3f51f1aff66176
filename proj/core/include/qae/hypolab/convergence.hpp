#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qae/core/embedding.hpp"

namespace qae::hypolab {

struct ConvergencePoint {
  std::size_t n = 0;
  double mean_similarity = 0.0;
};

/// How fast the Monte Carlo mean settles. The reference is the mean of the
/// first `reference_n` query vectors; for each n, `resamples` random subsets of
/// size n are drawn without replacement from that reference set and the cosine
/// between normalize(mean(subset)) and normalize(mean(reference)) is averaged.
/// Throws InsufficientQueries when reference_n exceeds the available vectors or
/// some n lies outside [1, reference_n].
std::vector<ConvergencePoint> mc_convergence(std::span<const Embedding> query_vectors,
                                             std::span<const std::size_t> n_values,
                                             std::size_t reference_n, std::size_t resamples = 50,
                                             std::uint64_t seed = 0);

}  // namespace qae::hypolab
