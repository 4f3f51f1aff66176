#include "qae/index/flat_index.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "qae/core/error.hpp"
#include "qae/core/io.hpp"

namespace qae::index {
namespace {

constexpr std::array<char, 8> kMagic = {'Q', 'A', 'E', 'F', 'L', 'A', 'T', '\0'};

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto bits = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(bits & 0xFF));
    bits = static_cast<U>(bits >> 8);
  }
}

template <typename T>
T get_le(const unsigned char* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(p[i]) << (8 * i));
  return v;
}

std::string_view kind_name(EntryKind k) {
  return k == EntryKind::NaiveQuery ? "naive_query" : "single";
}


}  // namespace

FlatIndex FlatIndex::build(std::span<const strategies::DocRepresentation> reps, EntryKind kind) {
  if (reps.empty()) throw Error(Errc::EmptyIndex, "no document representations to index");
  FlatIndex idx;
  idx.dim_ = reps.front().vectors.empty() ? 0 : reps.front().vectors.front().dim();
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& rep : reps) {
    if (rep.vectors.empty()) {
      throw Error(Errc::EmptyInput, "document '" + rep.document_id + "' has no vectors");
    }
    if (!seen.emplace(rep.document_id, idx.document_ids_.size()).second) {
      throw Error(Errc::DuplicateDocumentId, "document id '" + rep.document_id + "' repeated");
    }
    const auto ordinal = static_cast<std::uint32_t>(idx.document_ids_.size());
    idx.document_ids_.push_back(rep.document_id);
    for (const auto& v : rep.vectors) {
      if (v.dim() != idx.dim_) {
        throw Error(Errc::DimensionMismatch, "document '" + rep.document_id + "' has dim " +
                                                 std::to_string(v.dim()) + ", index has " +
                                                 std::to_string(idx.dim_));
      }
      for (double x : v.values()) idx.vectors_.push_back(static_cast<float>(x));
      idx.entry_document_.push_back(ordinal);
      idx.entry_kind_.push_back(kind);
    }
  }
  idx.compute_norms();
  return idx;
}

void FlatIndex::compute_norms() {
  inverse_norms_.resize(entry_count());
  for (std::size_t e = 0; e < entry_count(); ++e) {
    double sum = 0.0;
    for (float x : entry_vector(e)) sum += static_cast<double>(x) * x;
    const double n = std::sqrt(sum);
    if (n <= kZeroNormEpsilon) throw Error(Errc::ZeroVector, "index entry has zero norm");
    inverse_norms_[e] = 1.0 / n;
  }
}

std::vector<double> FlatIndex::document_scores(const Embedding& query) const {
  if (entry_count() == 0) throw Error(Errc::EmptyIndex, "index is empty");
  if (query.dim() != dim_) {
    throw Error(Errc::DimensionMismatch, "query dim " + std::to_string(query.dim()) +
                                             " vs index dim " + std::to_string(dim_));
  }
  const double qn = query.norm();
  if (qn <= kZeroNormEpsilon) throw Error(Errc::ZeroVector, "query has zero norm");
  const auto q = query.values();

  std::vector<double> best(document_count(), -std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < entry_count(); ++e) {
    const float* row = vectors_.data() + e * dim_;
    double sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) sum += static_cast<double>(row[i]) * q[i];
    const double score = std::clamp(sum * inverse_norms_[e] / qn, -1.0, 1.0);
    double& slot = best[entry_document_[e]];
    slot = std::max(slot, score);
  }
  return best;
}

SearchResult FlatIndex::search(const Embedding& query, std::size_t k) const {
  if (k == 0) throw Error(Errc::InvalidArgument, "k must be >= 1");
  const auto scores = document_scores(query);
  std::vector<std::uint32_t> order(scores.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return document_ids_[a] < document_ids_[b];
  };
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), better);

  SearchResult out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({document_ids_[order[i]], scores[order[i]]});
  return out;
}

std::filesystem::path FlatIndex::sidecar_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".ids.json";
  return p;
}

void FlatIndex::save(const std::filesystem::path& path) const {
  std::string bytes(kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(bytes, kFormatVersion);
  put_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(dim_));
  put_le<std::uint64_t>(bytes, entry_count());
  put_le<std::uint64_t>(bytes, document_count());
  bytes.reserve(bytes.size() + vector_bytes());
  for (float f : vectors_) put_le<std::uint32_t>(bytes, std::bit_cast<std::uint32_t>(f));

  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t e = 0; e < entry_count(); ++e) {
    entries.push_back({{"document", entry_document(e)}, {"kind", kind_name(entry_kind_[e])}});
  }
  const nlohmann::json sidecar = {{"format", "qae-flat-index"}, {"version", kFormatVersion},
                                  {"dim", dim_},                {"count", entry_count()},
                                  {"documents", document_ids_}, {"entries", entries}};
  write_file_atomic(sidecar_path(path), sidecar.dump(1) + "\n");
  write_file_atomic(path, bytes);
}

FlatIndex FlatIndex::load(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  auto mismatch = [&](const std::string& why) {
    return Error(Errc::FormatVersionMismatch, path.string() + ": " + why);
  };
  if (bytes.size() < kHeaderBytes || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw mismatch("not a qae flat index (bad magic or truncated header)");
  }
  const auto version = get_le<std::uint32_t>(p + 8);
  if (version != kFormatVersion) throw mismatch("unsupported version " + std::to_string(version));
  const auto dim = get_le<std::uint32_t>(p + 12);
  const auto count = get_le<std::uint64_t>(p + 16);
  const auto docs = get_le<std::uint64_t>(p + 24);
  if (dim == 0 || count == 0 || docs == 0 || docs > count) throw mismatch("inconsistent header");
  if (count > (bytes.size() - kHeaderBytes) / (4ULL * dim) ||
      bytes.size() != kHeaderBytes + 4ULL * dim * count) {
    throw mismatch("file size does not match header (truncated?)");
  }

  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(read_file(sidecar_path(path)));
  } catch (const nlohmann::json::exception& e) {
    throw mismatch(std::string("unreadable id sidecar: ") + e.what());
  }

  FlatIndex idx;
  idx.dim_ = dim;
  try {
    if (sidecar.at("format") != "qae-flat-index" || sidecar.at("version") != kFormatVersion ||
        sidecar.at("dim").get<std::uint64_t>() != dim ||
        sidecar.at("count").get<std::uint64_t>() != count) {
      throw mismatch("sidecar does not match binary header");
    }
    idx.document_ids_ = sidecar.at("documents").get<std::vector<std::string>>();
    if (idx.document_ids_.size() != docs) throw mismatch("document count mismatch");
    std::unordered_map<std::string, std::uint32_t> ordinal;
    for (std::uint32_t i = 0; i < idx.document_ids_.size(); ++i) {
      if (!ordinal.emplace(idx.document_ids_[i], i).second) throw mismatch("duplicate document id");
    }
    const auto& entries = sidecar.at("entries");
    if (entries.size() != count) throw mismatch("entry count mismatch");
    for (const auto& e : entries) {
      auto it = ordinal.find(e.at("document").get<std::string>());
      if (it == ordinal.end()) throw mismatch("entry refers to unknown document");
      idx.entry_document_.push_back(it->second);
      const auto kind = e.at("kind").get<std::string>();
      if (kind == "single") idx.entry_kind_.push_back(EntryKind::Single);
      else if (kind == "naive_query") idx.entry_kind_.push_back(EntryKind::NaiveQuery);
      else throw mismatch("unknown entry kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw mismatch(std::string("malformed id sidecar: ") + e.what());
  }

  idx.vectors_.resize(static_cast<std::size_t>(count) * dim);
  for (std::size_t i = 0; i < idx.vectors_.size(); ++i) {
    idx.vectors_[i] = std::bit_cast<float>(get_le<std::uint32_t>(p + kHeaderBytes + 4 * i));
  }
  idx.compute_norms();
  return idx;
}

}  // namespace qae::index
