#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "qae/providers/cache.hpp"
#include "qae/providers/provider.hpp"

namespace qae::providers {

/// The question-generator prompt with `[Document]` and `[Number of Questions]`
/// filled in.
std::string render_question_prompt(std::string_view document_text, int num_questions);

struct ParsedQuestions {
  std::vector<std::string> questions;
  std::size_t duplicates_removed = 0;
};

/// Parses a generator reply of the form
///
///   ```json
///   ["1. question", "2. question", ...]
///   ```
///
/// The fence is optional; the first top-level JSON array in the reply is used.
/// Leading enumerations ("1. ", "2) ") and surrounding whitespace are stripped,
/// empty entries dropped, duplicates removed keeping the first occurrence.
/// Throws UnparseableOutput when no JSON array of strings can be found.
ParsedQuestions parse_question_list(std::string_view reply);

/// One round of query generation: render, complete (with retries for transport
/// failures), parse. A reply that cannot be parsed is re-requested once with the
/// same prompt before UnparseableOutput is raised. Zero usable questions raise
/// TooFewQueries; fewer than requested is recorded in `shortfall`.
PredictedQueries generate_queries(QueryGenerator& generator, const QueryGenRequest& request,
                                  std::string document_id, const RetryPolicy& retry = {});

/// Offline generator. Text documents get 5W1H-style template questions built
/// from words of the document, seeded by (seed, FNV-1a(document)). Geometric
/// stub documents `doc:<id>` get `query:<id>:0 .. query:<id>:n-1`. Replies are
/// formatted exactly like an LLM reply so they exercise the parser.
class StubQueryGenerator final : public QueryGenerator {
 public:
  explicit StubQueryGenerator(std::uint64_t seed = 0) : seed_(seed) {}

  std::string generator_id() const override { return "stub-generator"; }
  std::string model_id() const override { return "stub-templates-s" + std::to_string(seed_); }
  std::string complete(const std::string& prompt, const QueryGenRequest& request) override;

  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  std::uint64_t seed_;
  std::atomic<std::size_t> calls_{0};
};

/// Cached front end for a QueryGenerator. Cache values are
/// `{"document_id", "generator_id", "queries"}`, keyed on the generator, model,
/// document text, count and sampling parameters.
class QueryService {
 public:
  struct Options {
    double temperature = 0.95;
    double frequency_penalty = 0.1;
    std::optional<std::uint64_t> seed;
    RetryPolicy retry{};
    std::size_t max_in_flight = 4;
  };

  QueryService(std::shared_ptr<QueryGenerator> generator, std::shared_ptr<JsonlCache> cache);
  QueryService(std::shared_ptr<QueryGenerator> generator, std::shared_ptr<JsonlCache> cache,
               Options options);

  PredictedQueries generate(const std::string& document_id, const std::string& document_text,
                            int num_questions);
  bool is_cached(const std::string& document_text, int num_questions) const;

  std::string generator_id() const { return generator_->generator_id(); }
  std::string model_id() const { return generator_->model_id(); }
  std::size_t generator_calls() const noexcept { return generator_calls_.load(); }

 private:
  QueryGenRequest make_request(const std::string& document_text, int num_questions) const;
  std::string key_for(const QueryGenRequest& request) const;

  std::shared_ptr<QueryGenerator> generator_;
  std::shared_ptr<JsonlCache> cache_;
  Options options_;
  std::counting_semaphore<> in_flight_;
  std::atomic<std::size_t> generator_calls_{0};
};

}  // namespace qae::providers
