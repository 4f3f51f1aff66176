#include "qae/hypolab/gaussian.hpp"

#include <cmath>
#include <string>

#include "qae/core/error.hpp"

namespace qae::hypolab {

Covariance Covariance::isotropic(double variance) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw Error(Errc::InvalidCovariance, "isotropic variance must be finite and >= 0");
  }
  Covariance c;
  c.kind_ = Kind::Isotropic;
  c.scale_ = variance;
  return c;
}

Covariance Covariance::diagonal(std::vector<double> variances) {
  for (double v : variances) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(Errc::InvalidCovariance, "diagonal variances must be finite and >= 0");
    }
  }
  Covariance c;
  c.kind_ = Kind::Diagonal;
  c.diag_ = std::move(variances);
  return c;
}

Covariance Covariance::full(Eigen::MatrixXd matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw Error(Errc::InvalidCovariance, "covariance must be a non-empty square matrix");
  }
  if (!matrix.allFinite()) throw Error(Errc::InvalidCovariance, "covariance has non-finite entries");
  const double scale = std::max(matrix.cwiseAbs().maxCoeff(), 1.0);
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(Errc::InvalidCovariance, "covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix);
  if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw Error(Errc::InvalidCovariance, "covariance is not positive semi-definite");
  }
  Covariance c;
  c.kind_ = Kind::Full;
  c.full_ = std::move(matrix);
  return c;
}

void Covariance::check_dim(std::size_t dim) const {
  if ((kind_ == Kind::Diagonal && diag_.size() != dim) ||
      (kind_ == Kind::Full && static_cast<std::size_t>(full_.rows()) != dim)) {
    throw Error(Errc::InvalidCovariance, "covariance does not match dimension " + std::to_string(dim));
  }
}

Eigen::MatrixXd Covariance::dense(std::size_t dim) const {
  check_dim(dim);
  const auto d = static_cast<Eigen::Index>(dim);
  switch (kind_) {
    case Kind::Isotropic: return scale_ * Eigen::MatrixXd::Identity(d, d);
    case Kind::Diagonal: return Eigen::Map<const Eigen::VectorXd>(diag_.data(), d).asDiagonal();
    case Kind::Full: return full_;
  }
  return {};
}

double Covariance::quadratic_form(const Embedding& v) const {
  check_dim(v.dim());
  switch (kind_) {
    case Kind::Isotropic: return scale_ * dot(v, v);
    case Kind::Diagonal: {
      double s = 0.0;
      for (std::size_t i = 0; i < v.dim(); ++i) s += diag_[i] * v[i] * v[i];
      return s;
    }
    case Kind::Full: {
      const Eigen::VectorXd x = to_eigen(v);
      return x.dot(full_ * x);
    }
  }
  return 0.0;
}

GaussianSampler::GaussianSampler(const Embedding& mean, const Covariance& covariance)
    : mean_(to_eigen(mean)), kind_(covariance.kind()) {
  covariance.check_dim(mean.dim());
  const Eigen::MatrixXd sigma = covariance.dense(mean.dim());
  if (kind_ != Covariance::Kind::Full) {
    diag_sd_ = sigma.diagonal().cwiseSqrt();
    return;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    factor_ = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
}

Eigen::VectorXd GaussianSampler::sample_vector(Rng& rng) const {
  Eigen::VectorXd z(mean_.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  if (kind_ == Covariance::Kind::Full) return mean_ + factor_ * z;
  return mean_ + diag_sd_.cwiseProduct(z);
}

Embedding GaussianSampler::sample(Rng& rng) const { return from_eigen(sample_vector(rng)); }

std::vector<Embedding> sample_gaussian(const Embedding& mean, const Covariance& covariance,
                                       std::size_t count, std::uint64_t seed) {
  GaussianSampler sampler(mean, covariance);
  Rng rng(seed);
  std::vector<Embedding> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.sample(rng));
  return out;
}

Embedding random_unit(std::size_t dim, Rng& rng) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.normal();
  return normalize(Embedding(std::move(v)));
}

Embedding random_unit_orthogonal(const Embedding& axis, Rng& rng) {
  if (axis.dim() < 2) throw Error(Errc::InvalidArgument, "no orthogonal direction in dimension 1");
  const Embedding a = normalize(axis);
  for (;;) {
    const Embedding v = random_unit(a.dim(), rng);
    const Embedding w = v - dot(v, a) * a;
    if (w.norm() > 1e-6) return normalize(w);
  }
}

Eigen::VectorXd to_eigen(const Embedding& e) {
  return Eigen::Map<const Eigen::VectorXd>(e.values().data(), static_cast<Eigen::Index>(e.dim()));
}

Embedding from_eigen(const Eigen::VectorXd& v) {
  return Embedding(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace qae::hypolab
