#include "qae/providers/stub_embedder.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <vector>

#include "qae/core/error.hpp"
#include "qae/core/rng.hpp"

namespace qae::providers {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::vector<double> gaussian(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(dim);
  for (double& x : v) x = rng.normal();
  return v;
}

std::vector<double> unit(std::vector<double> v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}

// Removes the component along unit vector `axis`.
void project_out(std::vector<double>& v, std::span<const double> axis) {
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) d += v[i] * axis[i];
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * axis[i];
}

std::vector<double> random_tangent_unit(std::span<const double> axis, std::uint64_t seed) {
  auto v = gaussian(axis.size(), seed);
  project_out(v, axis);
  return unit(std::move(v));
}

std::vector<double> rotate_toward(std::span<const double> from, std::span<const double> dir,
                                  double angle_rad) {
  std::vector<double> out(from.size());
  const double c = std::cos(angle_rad), s = std::sin(angle_rad);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * from[i] + s * dir[i];
  return out;
}

bool parse_query_text(std::string_view text, std::string_view& id, std::uint64_t& j) {
  if (!text.starts_with("query:")) return false;
  text.remove_prefix(6);
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  id = text.substr(0, colon);
  const auto digits = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), j);
  return ec == std::errc() && ptr == digits.data() + digits.size();
}

}  // namespace

StubEmbedder::StubEmbedder(std::size_t dim, std::uint64_t seed,
                           std::optional<GeometricConfig> geometry)
    : dim_(dim), seed_(seed), geometry_(geometry) {
  if (dim_ < 2) throw Error(Errc::InvalidArgument, "stub embedder needs dim >= 2");
  if (geometry_) {
    const auto& g = *geometry_;
    if (!(g.inter_center_angle_deg > 0.0 && g.inter_center_angle_deg <= 90.0)) {
      throw Error(Errc::InvalidArgument, "inter_center_angle_deg must be in (0, 90]");
    }
    if (!(g.cluster_angle_deg >= 0.0 && g.cluster_angle_deg < 90.0) ||
        !(g.doc_offset_deg >= 0.0 && g.doc_offset_deg <= 180.0)) {
      throw Error(Errc::InvalidArgument, "cluster/doc angles out of range");
    }
  }
}

std::string StubEmbedder::model_id() const {
  std::string id = "stub-d" + std::to_string(dim_) + "-s" + std::to_string(seed_);
  if (geometry_) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "-geo-c%.6g-o%.6g-i%.6g", geometry_->cluster_angle_deg,
                  geometry_->doc_offset_deg, geometry_->inter_center_angle_deg);
    id += buf;
  }
  return id;
}

std::string StubEmbedder::document_text(std::string_view doc_id) {
  return "doc:" + std::string(doc_id);
}

std::string StubEmbedder::query_text(std::string_view doc_id, std::uint64_t j) {
  return "query:" + std::string(doc_id) + ":" + std::to_string(j);
}

const GeometricConfig& StubEmbedder::require_geometry() const {
  if (!geometry_) throw Error(Errc::InvalidArgument, "stub embedder is not in geometric mode");
  return *geometry_;
}

Embedding StubEmbedder::embed_text(std::string_view text) const {
  if (geometry_) {
    if (text.starts_with("doc:") && text.size() > 4) return document_vector(text.substr(4));
    std::string_view id;
    std::uint64_t j = 0;
    if (parse_query_text(text, id, j)) return query_vector(id, j);
  }
  return Embedding(unit(gaussian(dim_, derive_seed(derive_seed(seed_, "stub/text"), fnv1a64(text)))));
}

Embedding StubEmbedder::center(std::string_view doc_id) const {
  const auto& g = require_geometry();
  const auto axis = unit(gaussian(dim_, derive_seed(seed_, "stub/geo/axis")));
  const auto tangent = random_tangent_unit(
      axis, derive_seed(derive_seed(seed_, "stub/geo/center"), fnv1a64(doc_id)));
  // Two centers at polar angle psi with independent tangents have expected
  // cosine cos^2(psi); solve for the requested pairwise angle.
  const double psi = std::acos(std::sqrt(std::cos(g.inter_center_angle_deg * kDegToRad)));
  return Embedding(unit(rotate_toward(axis, tangent, psi)));
}

Embedding StubEmbedder::document_vector(std::string_view doc_id) const {
  const auto& g = require_geometry();
  const Embedding mu = center(doc_id);
  const auto dir = random_tangent_unit(
      mu.values(), derive_seed(derive_seed(seed_, "stub/geo/doc"), fnv1a64(doc_id)));
  return Embedding(unit(rotate_toward(mu.values(), dir, g.doc_offset_deg * kDegToRad)));
}

Embedding StubEmbedder::query_vector(std::string_view doc_id, std::uint64_t j) const {
  const auto& g = require_geometry();
  const Embedding mu = center(doc_id);
  const std::uint64_t s =
      derive_seed(derive_seed(derive_seed(seed_, "stub/geo/query"), fnv1a64(doc_id)), j);
  auto noise = gaussian(dim_, s);
  project_out(noise, mu.values());
  const double scale =
      std::tan(g.cluster_angle_deg * kDegToRad) / std::sqrt(static_cast<double>(dim_ - 1));
  std::vector<double> q(dim_);
  for (std::size_t i = 0; i < dim_; ++i) q[i] = mu[i] + scale * noise[i];
  return Embedding(unit(std::move(q)));
}

std::vector<Embedding> StubEmbedder::embed_batch(std::span<const std::string> texts) {
  ++calls_;
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_text(t));
  return out;
}

}  // namespace qae::providers
