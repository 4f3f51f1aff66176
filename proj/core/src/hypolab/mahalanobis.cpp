#include "qae/hypolab/mahalanobis.hpp"

#include <Eigen/Dense>

#include "qae/core/error.hpp"

namespace qae::hypolab {
namespace {

// Rows are centered points.
Eigen::MatrixXd centered(std::span<const Embedding> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto d = static_cast<Eigen::Index>(points.front().dim());
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (points[static_cast<std::size_t>(i)].dim() != points.front().dim()) {
      throw Error(Errc::DimensionMismatch, "points have different dimensions");
    }
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = points[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  x.rowwise() -= x.colwise().mean();
  return x;
}

}  // namespace

double default_regularization(std::span<const Embedding> points) {
  if (points.size() < 2) throw Error(Errc::TooFewSamples, "need at least 2 points");
  const Eigen::MatrixXd x = centered(points);
  const double trace = x.squaredNorm() / static_cast<double>(points.size() - 1);
  return 1e-6 * trace / static_cast<double>(x.cols());
}

MahalanobisResult mahalanobis_sq(std::span<const Embedding> points, double regularization,
                                 bool allow_projection) {
  if (points.size() < 2) throw Error(Errc::TooFewSamples, "need at least 2 points");
  if (!(regularization >= 0.0)) throw Error(Errc::InvalidArgument, "regularization must be >= 0");
  const Eigen::MatrixXd x = centered(points);
  const Eigen::Index n = x.rows(), d = x.cols();
  const Eigen::MatrixXd s = (x.transpose() * x) / static_cast<double>(n - 1);

  MahalanobisResult r;
  r.regularization = regularization;
  r.d2.resize(static_cast<std::size_t>(n));

  if (n - 1 < d && allow_projection) {
    const Eigen::Index m = n - 1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    // Eigenvalues ascend; the top m components are the last m columns.
    const Eigen::MatrixXd basis = eig.eigenvectors().rightCols(m);
    const Eigen::VectorXd lambda = eig.eigenvalues().tail(m).array() + regularization;
    if (lambda.minCoeff() <= 0.0) {
      throw Error(Errc::SingularCovariance, "principal subspace has a zero-variance direction");
    }
    const Eigen::MatrixXd coords = x * basis;
    for (Eigen::Index i = 0; i < n; ++i) {
      r.d2[static_cast<std::size_t>(i)] = (coords.row(i).transpose().array().square() / lambda.array()).sum();
    }
    r.subspace_dim = static_cast<std::size_t>(m);
    r.projected = true;
    return r;
  }

  Eigen::MatrixXd a = s;
  a.diagonal().array() += regularization;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  bool singular = llt.info() != Eigen::Success;
  if (!singular && regularization == 0.0) {
    // LLT can succeed on numerically singular matrices; check conditioning.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
    singular = eig.eigenvalues().minCoeff() <= 1e-12 * std::max(eig.eigenvalues().maxCoeff(), 1e-300);
  }
  if (singular) throw Error(Errc::SingularCovariance, "sample covariance is singular");
  const Eigen::MatrixXd whitened = llt.matrixL().solve(x.transpose());  // d x n
  for (Eigen::Index i = 0; i < n; ++i) r.d2[static_cast<std::size_t>(i)] = whitened.col(i).squaredNorm();
  r.subspace_dim = static_cast<std::size_t>(d);
  return r;
}

}  // namespace qae::hypolab
