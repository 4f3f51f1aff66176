#pragma once

#include <chrono>
#include <string>

#include "qae/providers/provider.hpp"

namespace qae::providers {

/// Embedding server client.
///
///   POST {endpoint}/embed   {"texts": [...]}   ->   {"embeddings": [[...], ...]}
///
/// Connection failures and 5xx/429 responses raise ProviderUnavailable; other
/// non-2xx statuses and malformed bodies raise MalformedResponse.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(std::string endpoint, std::string model,
                        std::chrono::seconds timeout = std::chrono::seconds(60));

  std::string provider_id() const override { return "http:" + endpoint_; }
  std::string model_id() const override { return model_; }
  std::vector<Embedding> embed_batch(std::span<const std::string> texts) override;

 private:
  std::string endpoint_;
  std::string model_;
  std::chrono::seconds timeout_;
};

/// Chat-completions client used as a query generator.
///
///   POST {endpoint}/chat/completions
///   {"model", "messages": [{"role": "user", "content": prompt}],
///    "temperature", "frequency_penalty", ["seed"]}
///
/// The reply text is choices[0].message.content. The API key is read from the
/// named environment variable at call time and sent as a bearer token.
class HttpChatQueryGenerator final : public QueryGenerator {
 public:
  HttpChatQueryGenerator(std::string endpoint, std::string model,
                         std::string api_key_env = "OPENAI_API_KEY",
                         std::chrono::seconds timeout = std::chrono::seconds(120));

  std::string generator_id() const override { return "chat:" + endpoint_; }
  std::string model_id() const override { return model_; }
  std::string complete(const std::string& prompt, const QueryGenRequest& request) override;

 private:
  std::string endpoint_;
  std::string model_;
  std::string api_key_env_;
  std::chrono::seconds timeout_;
};

}  // namespace qae::providers
