#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qae {

/// Tolerance used to decide whether an embedding is unit-norm.
inline constexpr double kUnitNormTolerance = 1e-6;
/// L2 norms at or below this are treated as having no direction.
inline constexpr double kZeroNormEpsilon = 1e-12;

/// Immutable dense real vector. Every entry is finite and dim() >= 1.
///
/// Embeddings are values: copies are independent, and no member mutates the
/// stored coefficients after construction, so a const Embedding can be read from
/// any number of threads.
class Embedding {
 public:
  /// Throws Error(EmptyInput) for an empty vector and Error(NonFinite) for
  /// NaN/Inf entries.
  explicit Embedding(std::vector<double> values);
  Embedding(std::initializer_list<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double norm() const noexcept;
  bool is_normalized() const noexcept;

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::vector<double> values_;
};

double dot(const Embedding& a, const Embedding& b);

/// Cosine similarity clamped to [-1, 1].
/// Throws DimensionMismatch, or ZeroVector when either norm is <= kZeroNormEpsilon.
double cosine(const Embedding& a, const Embedding& b);

/// Angle between two vectors in degrees, in [0, 180].
double angle_degrees(const Embedding& a, const Embedding& b);

/// Unit vector in the direction of `a`. Throws ZeroVector when ||a|| <= 1e-12.
Embedding normalize(const Embedding& a);

/// Component-wise arithmetic mean, accumulated in double. Not normalized.
Embedding mean(std::span<const Embedding> vectors);

/// (1 - alpha) * a + alpha * b. alpha == 0 and alpha == 1 return the operand
/// itself. Throws AlphaOutOfRange outside [0, 1].
Embedding lerp(const Embedding& a, const Embedding& b, double alpha);

Embedding operator+(const Embedding& a, const Embedding& b);
Embedding operator-(const Embedding& a, const Embedding& b);
Embedding operator*(double scale, const Embedding& a);

}  // namespace qae
