#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace qae {

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// SplitMix64 finalizer; a bijective mix of a 64-bit word.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed fan-out. Every random stream in the project is obtained from the single
/// run seed through these two functions:
///   derive_seed(s, label) = mix64(s ^ mix64(fnv1a64(label)))
///   derive_seed(s, index) = mix64(s + 0x9E3779B97F4A7C15 * (index + 1))
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Platform-reproducible generator: std::mt19937_64 (fully specified by the
/// standard) plus hand-written distributions, since the std:: distributions are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via the Box-Muller transform (pairs are cached).
  double normal();

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qae
