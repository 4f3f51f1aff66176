#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "qae/core/embedding.hpp"
#include "qae/core/error.hpp"

namespace qae::providers {

/// Source of raw embeddings. Implementations may return vectors of any norm;
/// EmbeddingService validates and normalizes them.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string provider_id() const = 0;
  virtual std::string model_id() const = 0;

  /// One vector per input text. Transport failures are reported as
  /// Error(ProviderUnavailable) so the caller can retry.
  virtual std::vector<Embedding> embed_batch(std::span<const std::string> texts) = 0;
};

struct QueryGenRequest {
  std::string document_text;
  int num_questions = 10;
  double temperature = 0.95;
  double frequency_penalty = 0.1;
  std::optional<std::uint64_t> seed;
};

struct PredictedQueries {
  std::string document_id;
  std::vector<std::string> queries;
  std::string generator_id;
  // Bookkeeping from parsing: duplicates dropped and the shortfall against the
  // requested count (a warning, not an error).
  std::size_t duplicates_removed = 0;
  std::size_t shortfall = 0;
};

/// Text-completion backend for query generation. complete() receives the
/// rendered prompt together with the request it was rendered from and returns
/// the model's raw reply.
class QueryGenerator {
 public:
  virtual ~QueryGenerator() = default;

  virtual std::string generator_id() const = 0;
  virtual std::string model_id() const = 0;
  virtual std::string complete(const std::string& prompt, const QueryGenRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::vector<std::chrono::milliseconds> backoff{std::chrono::milliseconds(500),
                                                 std::chrono::milliseconds(2000)};
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };

  /// Same attempt count, but never sleeps. For tests and offline stubs.
  static RetryPolicy immediate(int attempts = 3) {
    RetryPolicy p;
    p.max_attempts = attempts;
    p.sleep = [](std::chrono::milliseconds) {};
    return p;
  }
};

/// Calls fn() until it succeeds, retrying only on Error(ProviderUnavailable).
/// The last failure is rethrown once max_attempts is exhausted.
template <typename Fn>
auto with_retry(const RetryPolicy& policy, Fn&& fn) -> decltype(fn()) {
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const Error& e) {
      if (e.code() != Errc::ProviderUnavailable || attempt >= policy.max_attempts) throw;
      if (!policy.backoff.empty()) {
        const std::size_t slot =
            std::min<std::size_t>(static_cast<std::size_t>(attempt - 1), policy.backoff.size() - 1);
        policy.sleep(policy.backoff[slot]);
      }
    }
  }
}

}  // namespace qae::providers
