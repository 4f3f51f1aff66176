#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qae/core/embedding.hpp"

namespace qae::hypolab {

struct MahalanobisResult {
  std::vector<double> d2;        // one per input point
  std::size_t subspace_dim = 0;  // degrees of freedom of the reference chi-squared
  bool projected = false;
  double regularization = 0.0;
};

/// Shrinkage default: 1e-6 * trace(S) / dim for the unbiased sample covariance S.
double default_regularization(std::span<const Embedding> points);

/// Squared Mahalanobis distances to the sample mean,
///   D2_i = (x_i - m)^T (S + reg * I)^-1 (x_i - m),
/// with S the unbiased sample covariance.
///
/// When count - 1 < dim and projection is allowed, the points are first
/// projected onto the top m = count - 1 principal components and D2 is computed
/// there (S is diagonal in that basis). Throws TooFewSamples (< 2 points),
/// DimensionMismatch, or SingularCovariance when reg == 0, the full covariance
/// is singular, and projection is disabled or unavailable.
MahalanobisResult mahalanobis_sq(std::span<const Embedding> points, double regularization,
                                 bool allow_projection = true);

}  // namespace qae::hypolab
