#include "qae/core/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qae/core/error.hpp"

namespace qae {
namespace {

void require_same_dim(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) {
    throw Error(Errc::DimensionMismatch,
                "dimension " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(Errc::EmptyInput, "embedding must have at least one component");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(Errc::NonFinite, "component " + std::to_string(i) + " is not finite");
    }
  }
}

Embedding::Embedding(std::initializer_list<double> values)
    : Embedding(std::vector<double>(values)) {}

double Embedding::norm() const noexcept {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

bool Embedding::is_normalized() const noexcept {
  return std::abs(norm() - 1.0) <= kUnitNormTolerance;
}

double dot(const Embedding& a, const Embedding& b) {
  require_same_dim(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
  return sum;
}

double cosine(const Embedding& a, const Embedding& b) {
  require_same_dim(a, b);
  const double na = a.norm();
  const double nb = b.norm();
  if (na <= kZeroNormEpsilon || nb <= kZeroNormEpsilon) {
    throw Error(Errc::ZeroVector, "cosine of a zero vector");
  }
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

double angle_degrees(const Embedding& a, const Embedding& b) {
  return std::acos(cosine(a, b)) * 180.0 / std::numbers::pi;
}

Embedding normalize(const Embedding& a) {
  const double n = a.norm();
  if (n <= kZeroNormEpsilon) {
    throw Error(Errc::ZeroVector, "cannot normalize a vector with norm " + std::to_string(n));
  }
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& v : out) v /= n;
  return Embedding(std::move(out));
}

Embedding mean(std::span<const Embedding> vectors) {
  if (vectors.empty()) throw Error(Errc::EmptyInput, "mean of an empty list");
  const std::size_t dim = vectors.front().dim();
  std::vector<double> sum(dim, 0.0);
  for (const Embedding& v : vectors) {
    require_same_dim(vectors.front(), v);
    for (std::size_t i = 0; i < dim; ++i) sum[i] += v[i];
  }
  const double count = static_cast<double>(vectors.size());
  for (double& s : sum) s /= count;
  return Embedding(std::move(sum));
}

Embedding lerp(const Embedding& a, const Embedding& b, double alpha) {
  require_same_dim(a, b);
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(Errc::AlphaOutOfRange, "alpha = " + std::to_string(alpha));
  }
  if (alpha == 0.0) return a;
  if (alpha == 1.0) return b;
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = (1.0 - alpha) * a[i] + alpha * b[i];
  return Embedding(std::move(out));
}

Embedding operator+(const Embedding& a, const Embedding& b) {
  require_same_dim(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return Embedding(std::move(out));
}

Embedding operator-(const Embedding& a, const Embedding& b) {
  require_same_dim(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return Embedding(std::move(out));
}

Embedding operator*(double scale, const Embedding& a) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& v : out) v *= scale;
  return Embedding(std::move(out));
}

}  // namespace qae
