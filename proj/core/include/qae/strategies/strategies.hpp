#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qae/core/document.hpp"
#include "qae/core/embedding.hpp"
#include "qae/providers/provider.hpp"

namespace qae::strategies {

enum class Strategy { Vanilla, Base, Emb, Txt, Hyb, Naive };

std::string_view to_string(Strategy s) noexcept;
/// Case-insensitive; accepts the names above and "qae_"-prefixed forms.
Strategy parse_strategy(std::string_view name);

bool uses_queries(Strategy s) noexcept;
bool uses_alpha(Strategy s) noexcept;
bool uses_beta(Strategy s) noexcept;

inline constexpr std::array<double, 7> kAlphaGrid = {0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9};
inline constexpr std::array<double, 6> kBetaGrid = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5};

/// Everything that determines a document's representation.
struct QaeConfig {
  Strategy strategy = Strategy::Vanilla;
  double alpha = 0.45;  // Emb, Hyb
  double beta = 0.75;   // Txt, Hyb
  int n = 10;           // predicted queries per document
  std::uint64_t shuffle_seed = 0;

  /// Throws InvalidArgument / AlphaOutOfRange for out-of-domain values.
  void validate() const;

  friend bool operator==(const QaeConfig&, const QaeConfig&) = default;
};

/// Stored vectors for one document: one for every strategy but Naive, which
/// keeps one per predicted query.
struct DocRepresentation {
  std::string document_id;
  std::vector<Embedding> vectors;
};

using EmbedFn = std::function<std::vector<Embedding>(std::span<const std::string>)>;

/// normalize(mean(queries)). The document embedding is accepted for interface
/// uniformity and ignored.
Embedding qae_base(const Embedding& doc_embedding, std::span<const Embedding> query_embeddings);

/// normalize((1 - alpha) * normalize(E(d)) + alpha * QAE_base).
Embedding qae_emb(const Embedding& doc_embedding, std::span<const Embedding> query_embeddings,
                  double alpha);

/// Document followed by shuffled predicted queries, one per line.
///
/// Queries are sorted, then shuffled with a stream derived from
/// (shuffle_seed, replicate_index), and appended until the appended characters
/// (UTF-8 code points, separators excluded) reach beta * |doc|. The query that
/// crosses the limit is kept, so at least one query is always appended.
std::string enrich_document(std::string_view doc_text, std::span<const std::string> queries,
                            double beta, std::uint64_t shuffle_seed, std::uint64_t replicate_index);

/// normalize(mean(E(enrich_document(..., r)) for r in [0, n_replicates))).
Embedding qae_txt(std::string_view doc_text, std::span<const std::string> queries, double beta,
                  std::size_t n_replicates, std::uint64_t shuffle_seed, const EmbedFn& embed);

/// normalize((1 - alpha) * txt + alpha * base).
Embedding qae_hyb(const Embedding& txt_vec, const Embedding& base_vec, double alpha);

/// Per-document intermediate vectors. compose() turns them into any strategy's
/// representation without calling the embedder again, which is what makes
/// alpha sweeps cheap.
struct RepresentationParts {
  std::string document_id;
  Embedding document;                  // normalized E(d)
  std::vector<Embedding> queries;      // normalized E(q_i), i < n
  std::optional<Embedding> base;       // QAE_base, when queries exist
  std::optional<Embedding> txt;        // QAE_txt at txt_beta
  double txt_beta = 0.0;
};

/// Embeds what `cfg` needs for one document. Queries beyond cfg.n are ignored.
RepresentationParts compute_parts(const DocumentRecord& doc, const providers::PredictedQueries* queries,
                                  const QaeConfig& cfg, const EmbedFn& embed);

/// Adds or replaces the QAE_txt vector at `beta`.
void add_txt_part(RepresentationParts& parts, const DocumentRecord& doc,
                  const providers::PredictedQueries& queries, double beta, int n,
                  std::uint64_t shuffle_seed, const EmbedFn& embed);

DocRepresentation compose(const RepresentationParts& parts, const QaeConfig& cfg);

/// Full pipeline for one document. Throws InvalidArgument when the predicted
/// queries belong to a different document or are missing for a strategy that
/// needs them.
DocRepresentation represent(const DocumentRecord& doc, const providers::PredictedQueries* queries,
                            const QaeConfig& cfg, const EmbedFn& embed);

}  // namespace qae::strategies
