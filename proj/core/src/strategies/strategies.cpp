#include "qae/strategies/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "qae/core/error.hpp"
#include "qae/core/rng.hpp"

namespace qae::strategies {
namespace {

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::vector<std::string> shuffled_queries(std::span<const std::string> queries,
                                          std::uint64_t shuffle_seed,
                                          std::uint64_t replicate_index) {
  std::vector<std::string> order(queries.begin(), queries.end());
  std::sort(order.begin(), order.end());
  Rng rng(derive_seed(derive_seed(shuffle_seed, "qae/txt/shuffle"), replicate_index));
  rng.shuffle(std::span<std::string>(order));
  return order;
}

// Number of leading entries of `ordered` kept by the length rule.
std::size_t kept_prefix(std::size_t doc_len, std::span<const std::string> ordered, double beta) {
  const double limit = beta * static_cast<double>(doc_len);
  std::size_t appended = 0;
  std::size_t k = 0;
  while (k < ordered.size()) {
    appended += code_points(ordered[k]);
    ++k;
    if (static_cast<double>(appended) >= limit) break;
  }
  return k;
}

std::span<const std::string> first_n(const providers::PredictedQueries& q, int n) {
  const std::size_t take = std::min<std::size_t>(q.queries.size(), static_cast<std::size_t>(std::max(n, 0)));
  return std::span<const std::string>(q.queries.data(), take);
}

}  // namespace

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::Vanilla: return "vanilla";
    case Strategy::Base: return "base";
    case Strategy::Emb: return "emb";
    case Strategy::Txt: return "txt";
    case Strategy::Hyb: return "hyb";
    case Strategy::Naive: return "naive";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower.starts_with("qae_")) lower.erase(0, 4);
  for (Strategy s : {Strategy::Vanilla, Strategy::Base, Strategy::Emb, Strategy::Txt,
                     Strategy::Hyb, Strategy::Naive}) {
    if (lower == to_string(s)) return s;
  }
  throw Error(Errc::InvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

bool uses_queries(Strategy s) noexcept { return s != Strategy::Vanilla; }
bool uses_alpha(Strategy s) noexcept { return s == Strategy::Emb || s == Strategy::Hyb; }
bool uses_beta(Strategy s) noexcept { return s == Strategy::Txt || s == Strategy::Hyb; }

void QaeConfig::validate() const {
  if (uses_alpha(strategy) && !(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(Errc::AlphaOutOfRange, "alpha must be in [0, 1], got " + std::to_string(alpha));
  }
  if (uses_beta(strategy) && !(beta > 0.0 && std::isfinite(beta))) {
    throw Error(Errc::InvalidArgument, "beta must be > 0, got " + std::to_string(beta));
  }
  if (uses_queries(strategy) && n < 1) {
    throw Error(Errc::InvalidArgument, "n must be >= 1, got " + std::to_string(n));
  }
}

Embedding qae_base(const Embedding& /*doc_embedding*/, std::span<const Embedding> query_embeddings) {
  if (query_embeddings.empty()) throw Error(Errc::EmptyInput, "QAE_base needs at least one query");
  return normalize(mean(query_embeddings));
}

Embedding qae_emb(const Embedding& doc_embedding, std::span<const Embedding> query_embeddings,
                  double alpha) {
  const Embedding doc = normalize(doc_embedding);
  if (alpha == 0.0) return doc;
  return normalize(lerp(doc, qae_base(doc_embedding, query_embeddings), alpha));
}

std::string enrich_document(std::string_view doc_text, std::span<const std::string> queries,
                            double beta, std::uint64_t shuffle_seed,
                            std::uint64_t replicate_index) {
  if (queries.empty()) throw Error(Errc::EmptyInput, "enrichment needs at least one query");
  if (!(beta > 0.0)) throw Error(Errc::InvalidArgument, "beta must be > 0");
  const auto order = shuffled_queries(queries, shuffle_seed, replicate_index);
  const std::size_t k = kept_prefix(code_points(doc_text), order, beta);
  std::string out(doc_text);
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back('\n');
    out += order[i];
  }
  return out;
}

Embedding qae_txt(std::string_view doc_text, std::span<const std::string> queries, double beta,
                  std::size_t n_replicates, std::uint64_t shuffle_seed, const EmbedFn& embed) {
  if (n_replicates < 1) throw Error(Errc::InvalidArgument, "n_replicates must be >= 1");
  std::vector<std::string> enriched;
  enriched.reserve(n_replicates);
  for (std::size_t r = 0; r < n_replicates; ++r) {
    enriched.push_back(enrich_document(doc_text, queries, beta, shuffle_seed, r));
  }
  const auto vectors = embed(enriched);
  return normalize(mean(vectors));
}

Embedding qae_hyb(const Embedding& txt_vec, const Embedding& base_vec, double alpha) {
  return normalize(lerp(txt_vec, base_vec, alpha));
}

RepresentationParts compute_parts(const DocumentRecord& doc,
                                  const providers::PredictedQueries* queries,
                                  const QaeConfig& cfg, const EmbedFn& embed) {
  cfg.validate();
  if (queries && queries->document_id != doc.id) {
    throw Error(Errc::InvalidArgument, "predicted queries for '" + queries->document_id +
                                           "' passed for document '" + doc.id + "'");
  }
  const std::string text = doc.full_text();
  RepresentationParts parts{doc.id, embed(std::span<const std::string>(&text, 1)).front(), {}, {}, {}, 0.0};

  if (!uses_queries(cfg.strategy)) return parts;
  if (!queries || queries->queries.empty()) {
    throw Error(Errc::InvalidArgument, "strategy " + std::string(to_string(cfg.strategy)) +
                                           " needs predicted queries for '" + doc.id + "'");
  }
  const auto used = first_n(*queries, cfg.n);
  parts.queries = embed(used);
  parts.base = qae_base(parts.document, parts.queries);
  if (uses_beta(cfg.strategy)) {
    add_txt_part(parts, doc, *queries, cfg.beta, cfg.n, cfg.shuffle_seed, embed);
  }
  return parts;
}

void add_txt_part(RepresentationParts& parts, const DocumentRecord& doc,
                  const providers::PredictedQueries& queries, double beta, int n,
                  std::uint64_t shuffle_seed, const EmbedFn& embed) {
  const auto used = first_n(queries, n);
  if (used.empty()) throw Error(Errc::EmptyInput, "QAE_txt needs at least one query");
  parts.txt = qae_txt(doc.full_text(), used, beta, used.size(), shuffle_seed, embed);
  parts.txt_beta = beta;
}

DocRepresentation compose(const RepresentationParts& parts, const QaeConfig& cfg) {
  cfg.validate();
  DocRepresentation rep{parts.document_id, {}};
  auto need = [&](const std::optional<Embedding>& v, const char* what) -> const Embedding& {
    if (!v) throw Error(Errc::InvalidArgument, std::string("missing ") + what + " part for '" +
                                                   parts.document_id + "'");
    return *v;
  };
  switch (cfg.strategy) {
    case Strategy::Vanilla:
      rep.vectors.push_back(normalize(parts.document));
      break;
    case Strategy::Base:
      rep.vectors.push_back(need(parts.base, "QAE_base"));
      break;
    case Strategy::Emb: {
      const Embedding& base = need(parts.base, "QAE_base");
      const Embedding doc = normalize(parts.document);
      rep.vectors.push_back(cfg.alpha == 0.0 ? doc : normalize(lerp(doc, base, cfg.alpha)));
      break;
    }
    case Strategy::Txt:
      if (parts.txt_beta != cfg.beta) need(std::nullopt, "QAE_txt");
      rep.vectors.push_back(need(parts.txt, "QAE_txt"));
      break;
    case Strategy::Hyb:
      if (parts.txt_beta != cfg.beta) need(std::nullopt, "QAE_txt");
      rep.vectors.push_back(qae_hyb(need(parts.txt, "QAE_txt"), need(parts.base, "QAE_base"), cfg.alpha));
      break;
    case Strategy::Naive:
      if (parts.queries.empty()) need(std::nullopt, "query");
      rep.vectors = parts.queries;
      break;
  }
  return rep;
}

DocRepresentation represent(const DocumentRecord& doc, const providers::PredictedQueries* queries,
                            const QaeConfig& cfg, const EmbedFn& embed) {
  return compose(compute_parts(doc, queries, cfg, embed), cfg);
}

}  // namespace qae::strategies
