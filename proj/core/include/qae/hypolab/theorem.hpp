#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qae/core/embedding.hpp"
#include "qae/hypolab/gaussian.hpp"

namespace qae::hypolab {

struct GaussianSpec {
  Embedding mu;  // unit norm
  Covariance sigma;
  double theta_deg = 0.0;  // angle between mu and the probe document d
};

struct TailRow {
  double t = 0.0;
  double empirical_doc = 0.0;   // P(|q.d - cos theta| >= t)
  double bound_doc = 0.0;       // 2 exp(-t^2 / (2 d'Sd))
  double empirical_mean = 0.0;  // P(|q.mu - 1| >= t)
  double bound_mean = 0.0;      // 2 exp(-t^2 / (2 mu'S mu))
};

struct TheoremReport {
  std::size_t dim = 0;
  double theta_deg = 0.0;
  std::size_t num_samples = 0;
  std::uint64_t seed = 0;
  Embedding document{1.0};
  double d_sigma_d = 0.0;
  double mu_sigma_mu = 0.0;
  std::vector<TailRow> rows;
  /// Fraction of samples with q.mu - q.d > 0.
  double positive_fraction = 0.0;
  /// Mean of (q.mu)(1 - cos theta) - (q.mu - q.d).
  double identity_residual_mean = 0.0;
  /// max |q.mu - q.d| over all samples.
  double max_abs_difference = 0.0;
};

/// Samples q ~ N(mu, Sigma) and compares tail frequencies with the
/// concentration bounds. The probe is d = cos(theta) mu + sin(theta) w for a
/// seeded random unit w orthogonal to mu; theta = 0 gives d = mu exactly.
/// Throws InvalidArgument (num_samples < 1000, non-unit mu, t <= 0) or
/// InvalidCovariance.
TheoremReport theorem_check(const GaussianSpec& spec, std::span<const double> t_values,
                            std::size_t num_samples, std::uint64_t seed);

}  // namespace qae::hypolab
