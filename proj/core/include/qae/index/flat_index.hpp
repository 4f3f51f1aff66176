#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qae/core/embedding.hpp"
#include "qae/strategies/strategies.hpp"

namespace qae::index {

enum class EntryKind : std::uint8_t { Single = 0, NaiveQuery = 1 };

struct ScoredDocument {
  std::string document_id;
  double score = 0.0;

  friend bool operator==(const ScoredDocument&, const ScoredDocument&) = default;
};

/// Ranked documents: scores non-increasing, ids unique, ties by ascending id.
using SearchResult = std::vector<ScoredDocument>;

/// Exhaustive cosine index over float32 vectors.
///
/// A document may own several entries (QAE_naive); its score is the maximum
/// over them. The index is immutable once built, so search() may be called
/// concurrently.
///
/// On-disk layout (all integers little-endian):
///
///   offset  size  field
///   0       8     magic "QAEFLAT\0"
///   8       4     format version (1)
///   12      4     dim
///   16      8     entry count N
///   24      8     document count D
///   32      4*N*dim  entry vectors, float32 LE, row-major
///
/// plus a JSON sidecar `<path>.ids.json`:
///   {"format": "qae-flat-index", "version": 1, "dim", "count",
///    "documents": [id, ...], "entries": [{"document": id, "kind": "single"|"naive_query"}, ...]}
class FlatIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;
  static constexpr std::size_t kHeaderBytes = 32;

  /// Errors: EmptyIndex (no representations), DuplicateDocumentId,
  /// DimensionMismatch.
  static FlatIndex build(std::span<const strategies::DocRepresentation> reps,
                         EntryKind kind = EntryKind::Single);

  /// Top-k documents by cosine similarity. k larger than the corpus returns
  /// every document. Errors: EmptyIndex, DimensionMismatch, InvalidArgument (k == 0).
  SearchResult search(const Embedding& query, std::size_t k) const;

  /// Every document's score, in document insertion order.
  std::vector<double> document_scores(const Embedding& query) const;

  void save(const std::filesystem::path& path) const;
  static FlatIndex load(const std::filesystem::path& path);
  static std::filesystem::path sidecar_path(const std::filesystem::path& path);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t entry_count() const noexcept { return entry_document_.size(); }
  std::size_t document_count() const noexcept { return document_ids_.size(); }
  std::size_t vector_bytes() const noexcept { return vectors_.size() * sizeof(float); }
  std::size_t serialized_bytes() const noexcept { return kHeaderBytes + vector_bytes(); }

  std::span<const float> entry_vector(std::size_t i) const noexcept {
    return {vectors_.data() + i * dim_, dim_};
  }
  const std::string& entry_document(std::size_t i) const noexcept {
    return document_ids_[entry_document_[i]];
  }
  EntryKind entry_kind(std::size_t i) const noexcept { return entry_kind_[i]; }
  const std::vector<std::string>& document_ids() const noexcept { return document_ids_; }

  friend bool operator==(const FlatIndex& a, const FlatIndex& b) {
    return a.dim_ == b.dim_ && a.vectors_ == b.vectors_ && a.document_ids_ == b.document_ids_ &&
           a.entry_document_ == b.entry_document_ && a.entry_kind_ == b.entry_kind_;
  }

 private:
  FlatIndex() = default;
  void compute_norms();

  std::size_t dim_ = 0;
  std::vector<float> vectors_;
  std::vector<double> inverse_norms_;
  std::vector<std::string> document_ids_;
  std::vector<std::uint32_t> entry_document_;
  std::vector<EntryKind> entry_kind_;
};

}  // namespace qae::index
