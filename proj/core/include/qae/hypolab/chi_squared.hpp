#pragma once

#include <span>
#include <vector>

namespace qae::hypolab {

/// ln Gamma(a) for a > 0 (Lanczos, g = 7).
double log_gamma(double a);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0. Series expansion
/// for x < a + 1, Lentz continued fraction for Q otherwise.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

double chi_squared_cdf(double x, double dof);

/// Inverse CDF by bisection on P(dof/2, x/2) until the bracket is narrower
/// than 1e-10 * max(1, x).
double chi_squared_quantile(double p, double dof);

struct QqPair {
  double theoretical = 0.0;
  double empirical = 0.0;
};

/// Sorted values paired with chi-squared quantiles at plotting positions
/// (i - 0.5) / n.
std::vector<QqPair> chisq_qq(std::span<const double> d2_values, int dof);

}  // namespace qae::hypolab
