#include "qae/hypolab/convergence.hpp"

#include <numeric>
#include <string>

#include "qae/core/error.hpp"
#include "qae/core/rng.hpp"

namespace qae::hypolab {

std::vector<ConvergencePoint> mc_convergence(std::span<const Embedding> query_vectors,
                                             std::span<const std::size_t> n_values,
                                             std::size_t reference_n, std::size_t resamples,
                                             std::uint64_t seed) {
  if (reference_n < 1 || reference_n > query_vectors.size()) {
    throw Error(Errc::InsufficientQueries, "reference_n = " + std::to_string(reference_n) + " but " +
                                               std::to_string(query_vectors.size()) + " vectors available");
  }
  if (resamples < 1) throw Error(Errc::InvalidArgument, "resamples must be >= 1");
  const auto reference_set = query_vectors.first(reference_n);
  const Embedding reference = normalize(mean(reference_set));

  std::vector<ConvergencePoint> out;
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    const std::size_t n = n_values[k];
    if (n < 1 || n > reference_n) {
      throw Error(Errc::InsufficientQueries, "n = " + std::to_string(n) + " outside [1, reference_n]");
    }
    Rng rng(derive_seed(derive_seed(seed, "hypolab/mc"), n));
    std::vector<std::size_t> idx(reference_n);
    double sum = 0.0;
    for (std::size_t r = 0; r < resamples; ++r) {
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      // Partial Fisher-Yates: the first n slots become a uniform n-subset.
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(reference_n - i));
        std::swap(idx[i], idx[j]);
      }
      std::vector<Embedding> subset;
      subset.reserve(n);
      for (std::size_t i = 0; i < n; ++i) subset.push_back(reference_set[idx[i]]);
      sum += cosine(normalize(mean(subset)), reference);
    }
    out.push_back({n, sum / static_cast<double>(resamples)});
  }
  return out;
}

}  // namespace qae::hypolab
