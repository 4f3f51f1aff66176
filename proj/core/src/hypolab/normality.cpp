#include "qae/hypolab/normality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qae/core/error.hpp"

namespace qae::hypolab {
namespace {

// ln Phi(z) and ln(1 - Phi(z)) through erfc, which stays accurate in the tails.
double log_cdf(double z) { return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2)); }
double log_sf(double z) { return std::log(0.5 * std::erfc(z / std::numbers::sqrt2)); }

}  // namespace

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

AndersonDarlingResult anderson_darling(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 8) throw Error(Errc::TooFewSamples, "Anderson-Darling needs at least 8 samples");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0) || sd <= 1e-300 || x.front() == x.back()) {
    throw Error(Errc::ZeroVariance, "Anderson-Darling input has zero variance");
  }

  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = (x[i] - mean) / sd;
    const double zr = (x[n - 1 - i] - mean) / sd;
    s += static_cast<double>(2 * i + 1) * (log_cdf(zi) + log_sf(zr));
  }
  const double nn = static_cast<double>(n);
  AndersonDarlingResult r;
  r.a2 = -nn - s / nn;
  r.a2_star = r.a2 * (1.0 + 4.0 / nn - 25.0 / (nn * nn));
  r.reject_at_5pct = r.a2_star > kAndersonDarlingCritical5pct;
  return r;
}

std::vector<AndersonDarlingResult> anderson_darling_marginals(std::span<const Embedding> points) {
  if (points.empty()) throw Error(Errc::TooFewSamples, "no points");
  const std::size_t dim = points.front().dim();
  std::vector<AndersonDarlingResult> out;
  out.reserve(dim);
  std::vector<double> column(points.size());
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].dim() != dim) throw Error(Errc::DimensionMismatch, "points have different dimensions");
      column[i] = points[i][j];
    }
    out.push_back(anderson_darling(column));
  }
  return out;
}

double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw Error(Errc::TooFewSamples, "KS statistic of no values");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace qae::hypolab
