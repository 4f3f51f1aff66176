#include "qae/hypolab/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qae/core/error.hpp"
#include "qae/core/rng.hpp"

namespace qae::hypolab {

TheoremReport theorem_check(const GaussianSpec& spec, std::span<const double> t_values,
                            std::size_t num_samples, std::uint64_t seed) {
  if (num_samples < 1000) throw Error(Errc::InvalidArgument, "theorem_check needs at least 1000 samples");
  if (!spec.mu.is_normalized()) throw Error(Errc::InvalidArgument, "mu must be unit-norm");
  if (!(spec.theta_deg >= 0.0 && spec.theta_deg <= 180.0)) {
    throw Error(Errc::InvalidArgument, "theta must lie in [0, 180] degrees");
  }
  for (double t : t_values) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(Errc::InvalidArgument, "t values must be positive");
  }
  const std::size_t dim = spec.mu.dim();
  spec.sigma.check_dim(dim);

  const double theta = spec.theta_deg * std::numbers::pi / 180.0;
  const double cos_theta = spec.theta_deg == 0.0 ? 1.0 : std::cos(theta);
  Embedding d = spec.mu;
  if (spec.theta_deg != 0.0) {
    Rng dir_rng(derive_seed(seed, "hypolab/theorem/direction"));
    const Embedding w = random_unit_orthogonal(spec.mu, dir_rng);
    d = normalize(cos_theta * spec.mu + std::sin(theta) * w);
  }

  TheoremReport report;
  report.dim = dim;
  report.theta_deg = spec.theta_deg;
  report.num_samples = num_samples;
  report.seed = seed;
  report.document = d;
  report.d_sigma_d = spec.sigma.quadratic_form(d);
  report.mu_sigma_mu = spec.sigma.quadratic_form(spec.mu);

  const GaussianSampler sampler(spec.mu, spec.sigma);
  Rng rng(derive_seed(seed, "hypolab/theorem/samples"));
  const Eigen::VectorXd mu = to_eigen(spec.mu);
  const Eigen::VectorXd dv = to_eigen(d);

  std::vector<std::size_t> doc_hits(t_values.size(), 0), mean_hits(t_values.size(), 0);
  std::size_t positive = 0;
  double residual_sum = 0.0, max_abs = 0.0;
  for (std::size_t s = 0; s < num_samples; ++s) {
    const Eigen::VectorXd q = sampler.sample_vector(rng);
    const double qm = q.dot(mu);
    const double qd = q.dot(dv);
    const double diff = qm - qd;
    if (diff > 0.0) ++positive;
    residual_sum += qm * (1.0 - cos_theta) - diff;
    max_abs = std::max(max_abs, std::abs(diff));
    for (std::size_t i = 0; i < t_values.size(); ++i) {
      if (std::abs(qd - cos_theta) >= t_values[i]) ++doc_hits[i];
      if (std::abs(qm - 1.0) >= t_values[i]) ++mean_hits[i];
    }
  }

  const double n = static_cast<double>(num_samples);
  auto bound = [](double t, double var) {
    return var > 0.0 ? 2.0 * std::exp(-t * t / (2.0 * var)) : 0.0;
  };
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    const double t = t_values[i];
    report.rows.push_back({t, static_cast<double>(doc_hits[i]) / n, bound(t, report.d_sigma_d),
                           static_cast<double>(mean_hits[i]) / n, bound(t, report.mu_sigma_mu)});
  }
  report.positive_fraction = static_cast<double>(positive) / n;
  report.identity_residual_mean = residual_sum / n;
  report.max_abs_difference = max_abs;
  return report;
}

}  // namespace qae::hypolab
