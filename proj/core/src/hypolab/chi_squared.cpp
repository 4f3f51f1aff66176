#include "qae/hypolab/chi_squared.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qae/core/error.hpp"

namespace qae::hypolab {
namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEps = 1e-16;

double gamma_series(double a, double x) {
  double term = 1.0 / a, sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

void check_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw Error(Errc::InvalidArgument, "incomplete gamma needs a > 0 and x >= 0");
  }
}

}  // namespace

double log_gamma(double a) {
  if (!(a > 0.0)) throw Error(Errc::InvalidArgument, "log_gamma needs a > 0");
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (a < 0.5) {
    // Reflection keeps the Lanczos sum in its accurate range.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * a)) - log_gamma(1.0 - a);
  }
  const double z = a - 1.0;
  double sum = kCoef[0];
  for (std::size_t i = 1; i < kCoef.size(); ++i) sum += kCoef[i] / (z + static_cast<double>(i));
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double regularized_gamma_p(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return std::clamp(gamma_series(a, x), 0.0, 1.0);
  return std::clamp(1.0 - gamma_continued_fraction(a, x), 0.0, 1.0);
}

double regularized_gamma_q(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_continued_fraction(a, x), 0.0, 1.0);
}

double chi_squared_cdf(double x, double dof) {
  if (!(dof > 0.0)) throw Error(Errc::InvalidArgument, "chi-squared needs dof > 0");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(dof / 2.0, x / 2.0);
}

double chi_squared_quantile(double p, double dof) {
  if (!(dof > 0.0)) throw Error(Errc::InvalidArgument, "chi-squared needs dof > 0");
  if (!(p >= 0.0 && p < 1.0)) throw Error(Errc::InvalidArgument, "quantile needs p in [0, 1)");
  if (p == 0.0) return 0.0;
  double lo = 0.0, hi = std::max(1.0, dof);
  while (chi_squared_cdf(hi, dof) < p) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw Error(Errc::InvalidArgument, "quantile bracket overflow");
  }
  for (int i = 0; i < 500 && hi - lo > 1e-10 * std::max(1.0, lo); ++i) {
    const double mid = 0.5 * (lo + hi);
    (chi_squared_cdf(mid, dof) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<QqPair> chisq_qq(std::span<const double> d2_values, int dof) {
  if (dof < 1) throw Error(Errc::InvalidArgument, "dof must be >= 1");
  std::vector<double> sorted(d2_values.begin(), d2_values.end());
  for (double v : sorted) {
    if (!(v >= 0.0)) throw Error(Errc::InvalidArgument, "D2 values must be non-negative");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<QqPair> out;
  out.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    out.push_back({chi_squared_quantile(p, dof), sorted[i]});
  }
  return out;
}

}  // namespace qae::hypolab
