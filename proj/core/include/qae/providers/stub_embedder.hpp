#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qae/core/embedding.hpp"
#include "qae/providers/provider.hpp"

namespace qae::providers {

/// Synthetic cluster geometry for the stub's geometric mode.
///
/// All cluster centers sit at the same angle from a hidden global axis, chosen so
/// that two independent centers are `inter_center_angle_deg` apart on average.
/// Query vectors are the center plus isotropic Gaussian noise in its tangent
/// space, scaled so the root-mean-square angle to the center is
/// `cluster_angle_deg`. The document vector is rotated exactly
/// `doc_offset_deg` away from its center along a random tangent direction.
struct GeometricConfig {
  double cluster_angle_deg = 15.0;
  double doc_offset_deg = 40.0;
  double inter_center_angle_deg = 90.0;  // in (0, 90]; 90 means unrelated centers
};

/// Deterministic offline embedder.
///
/// Text mode: every text maps to a unit vector drawn from a Gaussian seeded by
/// (seed, FNV-1a(text)). Geometric mode additionally recognizes the synthetic
/// texts `doc:<id>` and `query:<id>:<j>` and answers them from the cluster
/// geometry above; any other text falls back to text mode.
class StubEmbedder final : public EmbeddingProvider {
 public:
  StubEmbedder(std::size_t dim, std::uint64_t seed,
               std::optional<GeometricConfig> geometry = std::nullopt);

  std::string provider_id() const override { return "stub"; }
  std::string model_id() const override;
  std::vector<Embedding> embed_batch(std::span<const std::string> texts) override;

  Embedding embed_text(std::string_view text) const;

  // Geometric mode only.
  Embedding center(std::string_view doc_id) const;
  Embedding document_vector(std::string_view doc_id) const;
  Embedding query_vector(std::string_view doc_id, std::uint64_t j) const;

  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::optional<GeometricConfig>& geometry() const noexcept { return geometry_; }
  std::size_t calls() const noexcept { return calls_.load(); }

  static std::string document_text(std::string_view doc_id);
  static std::string query_text(std::string_view doc_id, std::uint64_t j);

 private:
  const GeometricConfig& require_geometry() const;

  std::size_t dim_;
  std::uint64_t seed_;
  std::optional<GeometricConfig> geometry_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace qae::providers
