#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "qae/eval/dataset.hpp"
#include "qae/eval/metrics.hpp"
#include "qae/index/flat_index.hpp"
#include "qae/providers/embedding_service.hpp"
#include "qae/providers/query_generation.hpp"
#include "qae/strategies/strategies.hpp"

namespace qae::eval {

struct SkippedDocument {
  std::string document_id;
  std::string reason;
};

struct EvalReport {
  strategies::QaeConfig config;
  MetricSummary metrics;
  std::size_t index_entries = 0;
  std::size_t index_documents = 0;
  std::size_t index_vector_bytes = 0;
  std::size_t corpus_documents = 0;
  std::size_t dropped_judgments = 0;
  std::vector<SkippedDocument> skipped_documents;
  std::string embedder_id;
  std::string embedder_model;
  std::string generator_id;
  std::string generator_model;
  // Not part of the deterministic payload.
  double wall_clock_seconds = 0.0;
  std::string timestamp;
};

/// Report as JSON. Everything except the "timing" object is a pure function of
/// inputs, seeds and provider responses.
nlohmann::json to_json(const EvalReport& report);
void write_report(const std::filesystem::path& path, const EvalReport& report);

struct ExperimentProviders {
  providers::EmbeddingService* embedder = nullptr;
  providers::QueryService* queries = nullptr;  // required by every strategy but Vanilla
};

/// End-to-end runner: representations -> index -> search -> metrics.
///
/// With reuse enabled, per-document intermediate vectors (E(d), predicted
/// queries and their embeddings, QAE_base, QAE_txt per beta) and the query
/// embeddings are computed once and shared by every later run(), so sweeping
/// alpha only re-interpolates and rebuilds the index. run() may be called from
/// several threads.
///
/// Documents whose provider calls fail are left out of the index and listed in
/// the report.
class PreparedExperiment {
 public:
  PreparedExperiment(const Dataset& data, ExperimentProviders providers, std::size_t k = 10,
                     bool reuse = true, std::size_t jobs = 1);

  EvalReport run(const strategies::QaeConfig& cfg);

  /// Index for `cfg` plus the documents that had to be skipped.
  index::FlatIndex build_index(const strategies::QaeConfig& cfg,
                               std::vector<SkippedDocument>* skipped = nullptr);

  std::size_t k() const noexcept { return k_; }

 private:
  struct QueryState {
    providers::PredictedQueries predicted;
    std::vector<Embedding> embeddings;
    Embedding base;
  };
  struct DocState {
    std::optional<Embedding> document;
    std::map<int, QueryState> by_n;
    std::map<std::tuple<int, double, std::uint64_t>, Embedding> txt;  // (n, beta, seed)
    std::optional<std::string> document_failure;
    std::optional<std::string> query_failure;

    const std::optional<std::string>& failure(const strategies::QaeConfig& cfg) const;
  };

  void prepare(std::vector<DocState>& states, const strategies::QaeConfig& cfg);
  void fill(DocState& state, const DocumentRecord& doc, const strategies::QaeConfig& cfg);
  std::vector<Embedding> query_embeddings();

  const Dataset& data_;
  ExperimentProviders providers_;
  std::size_t k_;
  bool reuse_;
  std::size_t jobs_;
  std::mutex mutex_;
  std::vector<DocState> docs_;
  std::optional<std::vector<Embedding>> query_vectors_;
};

/// One-shot convenience wrapper around PreparedExperiment.
EvalReport run_experiment(const Dataset& data, const strategies::QaeConfig& cfg,
                          ExperimentProviders providers, std::size_t k = 10, std::size_t jobs = 1);

}  // namespace qae::eval
