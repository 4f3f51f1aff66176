#include "qae/eval/experiment.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "qae/core/error.hpp"
#include "qae/core/io.hpp"
#include "qae/core/parallel.hpp"

namespace qae::eval {
namespace {

using strategies::QaeConfig;
using strategies::Strategy;

constexpr std::size_t kQueryBatch = 64;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json config_json(const QaeConfig& c) {
  return {{"strategy", strategies::to_string(c.strategy)},
          {"alpha", c.alpha},
          {"beta", c.beta},
          {"n", c.n},
          {"shuffle_seed", c.shuffle_seed}};
}

}  // namespace

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json per_query = nlohmann::json::array();
  for (const auto& m : r.metrics.per_query) {
    per_query.push_back({{"query_id", m.query_id},
                         {"first_relevant_rank", m.first_relevant_rank
                                                     ? nlohmann::json(*m.first_relevant_rank)
                                                     : nlohmann::json(nullptr)},
                         {"reciprocal_rank", m.reciprocal_rank},
                         {"dcg", m.dcg},
                         {"idcg", m.idcg},
                         {"ndcg", m.ndcg}});
  }
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& s : r.skipped_documents) {
    skipped.push_back({{"document_id", s.document_id}, {"reason", s.reason}});
  }
  return {
      {"config", config_json(r.config)},
      {"k", r.metrics.k},
      {"metrics",
       {{"mrr_at_k", r.metrics.mrr},
        {"ndcg_at_k", r.metrics.ndcg},
        {"num_queries", r.metrics.num_queries},
        {"unjudged_queries", r.metrics.unjudged_queries},
        {"zero_relevance_queries", r.metrics.zero_relevance_queries}}},
      {"per_query", per_query},
      {"index",
       {{"entries", r.index_entries},
        {"documents", r.index_documents},
        {"vector_bytes", r.index_vector_bytes}}},
      {"corpus_documents", r.corpus_documents},
      {"dropped_judgments", r.dropped_judgments},
      {"skipped_documents", skipped},
      {"providers",
       {{"embedder", r.embedder_id},
        {"embedder_model", r.embedder_model},
        {"generator", r.generator_id},
        {"generator_model", r.generator_model}}},
      {"timing", {{"wall_clock_seconds", r.wall_clock_seconds}, {"timestamp", r.timestamp}}},
  };
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
  write_file_atomic(path, to_json(report).dump(2) + "\n");
}

PreparedExperiment::PreparedExperiment(const Dataset& data, ExperimentProviders providers,
                                       std::size_t k, bool reuse, std::size_t jobs)
    : data_(data), providers_(providers), k_(k), reuse_(reuse), jobs_(jobs) {
  if (!providers_.embedder) throw Error(Errc::InvalidArgument, "experiment needs an embedder");
  if (k_ < 1) throw Error(Errc::InvalidArgument, "k must be >= 1");
  if (data_.corpus.empty()) throw Error(Errc::EmptyInput, "corpus is empty");
}

const std::optional<std::string>& PreparedExperiment::DocState::failure(const QaeConfig& cfg) const {
  if (document_failure || !strategies::uses_queries(cfg.strategy)) return document_failure;
  return query_failure;
}

void PreparedExperiment::fill(DocState& state, const DocumentRecord& doc, const QaeConfig& cfg) {
  auto embed = [this](std::span<const std::string> texts) { return providers_.embedder->embed(texts); };
  if (!state.document) {
    try {
      state.document = providers_.embedder->embed_one(doc.full_text());
    } catch (const Error& e) {
      if (classify(e.code()) != ErrorClass::Provider) throw;
      state.document_failure = e.what();
      return;
    }
  }
  if (!strategies::uses_queries(cfg.strategy) || state.query_failure) return;
  if (!providers_.queries) {
    throw Error(Errc::InvalidArgument, "strategy " + std::string(strategies::to_string(cfg.strategy)) +
                                           " needs a query generator");
  }
  try {
    auto qs = state.by_n.find(cfg.n);
    if (qs == state.by_n.end()) {
      auto predicted = providers_.queries->generate(doc.id, doc.full_text(), cfg.n);
      const std::size_t used = std::min(predicted.queries.size(), static_cast<std::size_t>(cfg.n));
      auto vectors = embed(std::span<const std::string>(predicted.queries.data(), used));
      Embedding base = strategies::qae_base(*state.document, vectors);
      qs = state.by_n.emplace(cfg.n, QueryState{std::move(predicted), std::move(vectors), std::move(base)}).first;
    }
    const auto txt_key = std::tuple{cfg.n, cfg.beta, cfg.shuffle_seed};
    if (strategies::uses_beta(cfg.strategy) && !state.txt.contains(txt_key)) {
      strategies::RepresentationParts parts{doc.id, *state.document, {}, {}, {}, 0.0};
      strategies::add_txt_part(parts, doc, qs->second.predicted, cfg.beta, cfg.n, cfg.shuffle_seed, embed);
      state.txt.emplace(txt_key, std::move(*parts.txt));
    }
  } catch (const Error& e) {
    if (classify(e.code()) != ErrorClass::Provider) throw;
    state.query_failure = e.what();
  }
}

void PreparedExperiment::prepare(std::vector<DocState>& states, const QaeConfig& cfg) {
  states.resize(data_.corpus.size());
  parallel_for(data_.corpus.size(), jobs_,
               [&](std::size_t i) { fill(states[i], data_.corpus[i], cfg); });
}

index::FlatIndex PreparedExperiment::build_index(const QaeConfig& cfg,
                                                 std::vector<SkippedDocument>* skipped) {
  cfg.validate();
  std::vector<strategies::DocRepresentation> reps;
  reps.reserve(data_.corpus.size());
  {
    std::lock_guard lock(mutex_);
    std::vector<DocState> local;
    std::vector<DocState>& states = reuse_ ? docs_ : local;
    prepare(states, cfg);
    for (std::size_t i = 0; i < states.size(); ++i) {
      const DocState& s = states[i];
      const DocumentRecord& doc = data_.corpus[i];
      if (const auto& failure = s.failure(cfg)) {
        if (skipped) skipped->push_back({doc.id, *failure});
        continue;
      }
      strategies::RepresentationParts parts{doc.id, *s.document, {}, {}, {}, 0.0};
      if (strategies::uses_queries(cfg.strategy)) {
        const QueryState& q = s.by_n.at(cfg.n);
        parts.queries = q.embeddings;
        parts.base = q.base;
        if (strategies::uses_beta(cfg.strategy)) {
          parts.txt = s.txt.at(std::tuple{cfg.n, cfg.beta, cfg.shuffle_seed});
          parts.txt_beta = cfg.beta;
        }
      }
      reps.push_back(strategies::compose(parts, cfg));
    }
  }
  if (reps.empty()) throw Error(Errc::EmptyIndex, "every document failed; nothing to index");
  return index::FlatIndex::build(reps, cfg.strategy == Strategy::Naive ? index::EntryKind::NaiveQuery
                                                                       : index::EntryKind::Single);
}

std::vector<Embedding> PreparedExperiment::query_embeddings() {
  std::lock_guard lock(mutex_);
  if (reuse_ && query_vectors_) return *query_vectors_;
  std::vector<Embedding> out;
  out.reserve(data_.queries.size());
  for (std::size_t start = 0; start < data_.queries.size(); start += kQueryBatch) {
    std::vector<std::string> batch;
    for (std::size_t i = start; i < std::min(start + kQueryBatch, data_.queries.size()); ++i) {
      batch.push_back(data_.queries[i].text);
    }
    for (auto& e : providers_.embedder->embed(batch)) out.push_back(std::move(e));
  }
  if (reuse_) query_vectors_ = out;
  return out;
}

EvalReport PreparedExperiment::run(const QaeConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  EvalReport report;
  report.config = cfg;
  report.timestamp = utc_timestamp();
  report.corpus_documents = data_.corpus.size();
  report.dropped_judgments = data_.dropped_judgments;
  report.embedder_id = providers_.embedder->provider_id();
  report.embedder_model = providers_.embedder->model_id();
  if (providers_.queries && strategies::uses_queries(cfg.strategy)) {
    report.generator_id = providers_.queries->generator_id();
    report.generator_model = providers_.queries->model_id();
  }

  const index::FlatIndex idx = build_index(cfg, &report.skipped_documents);
  report.index_entries = idx.entry_count();
  report.index_documents = idx.document_count();
  report.index_vector_bytes = idx.vector_bytes();

  const auto qvecs = query_embeddings();
  std::vector<index::SearchResult> ranked(qvecs.size());
  parallel_for(qvecs.size(), jobs_, [&](std::size_t i) { ranked[i] = idx.search(qvecs[i], k_); });
  RunResults results;
  for (std::size_t i = 0; i < qvecs.size(); ++i) results.emplace(data_.queries[i].id, std::move(ranked[i]));

  report.metrics = evaluate(results, data_.qrels, k_);
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

EvalReport run_experiment(const Dataset& data, const QaeConfig& cfg, ExperimentProviders providers,
                          std::size_t k, std::size_t jobs) {
  PreparedExperiment experiment(data, providers, k, /*reuse=*/false, jobs);
  return experiment.run(cfg);
}

}  // namespace qae::eval
