#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <vector>

#include "qae/core/embedding.hpp"
#include "qae/providers/cache.hpp"
#include "qae/providers/provider.hpp"

namespace qae::providers {

/// The embedding function E(.) as seen by the rest of the system: validation,
/// normalization, content-addressed caching, retries and an in-flight cap in
/// front of an EmbeddingProvider.
class EmbeddingService {
 public:
  explicit EmbeddingService(std::shared_ptr<EmbeddingProvider> provider,
                            std::shared_ptr<JsonlCache> cache = nullptr,
                            RetryPolicy retry = {}, std::size_t max_in_flight = 4);

  /// Unit-norm embeddings, one per text, all of the same dimension.
  /// Errors: InvalidArgument (empty list or blank text), ProviderUnavailable
  /// after retries, MalformedResponse, DimMismatchAcrossBatch.
  std::vector<Embedding> embed(std::span<const std::string> texts);
  Embedding embed_one(const std::string& text);

  std::string provider_id() const;
  std::string model_id() const;
  std::optional<std::size_t> dim() const;

  /// Number of embed_batch() invocations that reached the provider.
  std::size_t provider_calls() const noexcept { return provider_calls_.load(); }
  /// Number of texts answered from the cache.
  std::size_t cache_hits() const noexcept { return cache_hits_.load(); }

  std::string key_for(const std::string& text) const;

 private:
  std::shared_ptr<EmbeddingProvider> provider_;
  std::shared_ptr<JsonlCache> cache_;
  RetryPolicy retry_;
  std::counting_semaphore<> in_flight_;
  std::atomic<std::size_t> provider_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
  std::atomic<std::size_t> dim_{0};
};

}  // namespace qae::providers
