#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qae/core/embedding.hpp"
#include "qae/core/rng.hpp"

namespace qae::hypolab {

/// Covariance of a multivariate Gaussian: isotropic (s * I), diagonal or full.
class Covariance {
 public:
  enum class Kind { Isotropic, Diagonal, Full };

  static Covariance isotropic(double variance);
  static Covariance diagonal(std::vector<double> variances);
  /// Must be symmetric positive semi-definite; throws InvalidCovariance otherwise.
  static Covariance full(Eigen::MatrixXd matrix);

  Kind kind() const noexcept { return kind_; }
  Eigen::MatrixXd dense(std::size_t dim) const;
  /// v^T Sigma v.
  double quadratic_form(const Embedding& v) const;
  /// Throws InvalidCovariance when the description does not fit `dim`.
  void check_dim(std::size_t dim) const;

 private:
  Kind kind_ = Kind::Isotropic;
  double scale_ = 0.0;
  std::vector<double> diag_;
  Eigen::MatrixXd full_;
};

/// Draws x = mean + L z with z standard normal, where L L^T = Sigma (Cholesky,
/// or the eigendecomposition when Sigma is only semi-definite). Normals come from
/// qae::Rng, so a seed reproduces the same stream on every platform.
class GaussianSampler {
 public:
  GaussianSampler(const Embedding& mean, const Covariance& covariance);

  Eigen::VectorXd sample_vector(Rng& rng) const;
  Embedding sample(Rng& rng) const;
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }

 private:
  Eigen::VectorXd mean_;
  Covariance::Kind kind_;
  Eigen::VectorXd diag_sd_;
  Eigen::MatrixXd factor_;
};

std::vector<Embedding> sample_gaussian(const Embedding& mean, const Covariance& covariance,
                                       std::size_t count, std::uint64_t seed);

/// Uniformly random unit vector.
Embedding random_unit(std::size_t dim, Rng& rng);
/// Uniformly random unit vector orthogonal to unit vector `axis`.
Embedding random_unit_orthogonal(const Embedding& axis, Rng& rng);

Eigen::VectorXd to_eigen(const Embedding& e);
Embedding from_eigen(const Eigen::VectorXd& v);

}  // namespace qae::hypolab
