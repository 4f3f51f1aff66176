#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qae/core/embedding.hpp"

namespace qae::hypolab {

/// Critical value of the modified statistic at the 5% level.
inline constexpr double kAndersonDarlingCritical5pct = 0.787;

struct AndersonDarlingResult {
  double a2 = 0.0;
  double a2_star = 0.0;
  bool reject_at_5pct = false;
};

/// Anderson-Darling normality test with mean and variance estimated from the
/// data (unbiased variance):
///   A2  = -n - (1/n) sum_i (2i - 1) [ln Phi(z_(i)) + ln(1 - Phi(z_(n+1-i)))]
///   A2* = A2 (1 + 4/n - 25/n^2), rejected at 5% when A2* > 0.787.
/// Throws TooFewSamples (n < 8) or ZeroVariance.
AndersonDarlingResult anderson_darling(std::span<const double> values);

/// One test per coordinate of the points.
std::vector<AndersonDarlingResult> anderson_darling_marginals(std::span<const Embedding> points);

double standard_normal_cdf(double z);

/// Kolmogorov-Smirnov distance sup |F_n(x) - F(x)|.
double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf);

}  // namespace qae::hypolab
