#include "qae/providers/embedding_service.hpp"

#include <algorithm>
#include <cctype>

#include "qae/core/error.hpp"

namespace qae::providers {
namespace {

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

EmbeddingService::EmbeddingService(std::shared_ptr<EmbeddingProvider> provider,
                                   std::shared_ptr<JsonlCache> cache, RetryPolicy retry,
                                   std::size_t max_in_flight)
    : provider_(std::move(provider)),
      cache_(std::move(cache)),
      retry_(std::move(retry)),
      in_flight_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(max_in_flight, 1))) {
  if (!provider_) throw Error(Errc::InvalidArgument, "embedding provider is null");
}

std::string EmbeddingService::provider_id() const { return provider_->provider_id(); }
std::string EmbeddingService::model_id() const { return provider_->model_id(); }

std::optional<std::size_t> EmbeddingService::dim() const {
  const std::size_t d = dim_.load();
  if (d == 0) return std::nullopt;
  return d;
}

std::string EmbeddingService::key_for(const std::string& text) const {
  return cache_key({{"kind", "embedding"},
                    {"provider", provider_->provider_id()},
                    {"model", provider_->model_id()},
                    {"text", text}});
}

std::vector<Embedding> EmbeddingService::embed(std::span<const std::string> texts) {
  if (texts.empty()) throw Error(Errc::InvalidArgument, "embed() needs at least one text");
  for (const auto& t : texts) {
    if (is_blank(t)) throw Error(Errc::InvalidArgument, "cannot embed an empty text");
  }

  std::vector<std::optional<Embedding>> slots(texts.size());
  std::vector<std::string> keys(texts.size());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (cache_) {
      keys[i] = key_for(texts[i]);
      if (auto hit = cache_->get(keys[i])) {
        slots[i] = Embedding(hit->get<std::vector<double>>());
        ++cache_hits_;
        continue;
      }
    }
    missing.push_back(i);
  }

  if (!missing.empty()) {
    std::vector<std::string> request;
    request.reserve(missing.size());
    for (std::size_t i : missing) request.push_back(texts[i]);

    std::vector<Embedding> raw = with_retry(retry_, [&] {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
      } release{in_flight_};
      ++provider_calls_;
      return provider_->embed_batch(request);
    });

    if (raw.size() != request.size()) {
      throw Error(Errc::MalformedResponse, "provider returned " + std::to_string(raw.size()) +
                                               " embeddings for " +
                                               std::to_string(request.size()) + " texts");
    }
    for (std::size_t j = 0; j < raw.size(); ++j) {
      std::size_t expected = 0;
      const std::size_t dim = raw[j].dim();
      if (!dim_.compare_exchange_strong(expected, dim) && expected != dim) {
        throw Error(Errc::DimMismatchAcrossBatch, "provider dimension changed from " +
                                                      std::to_string(expected) + " to " +
                                                      std::to_string(dim));
      }
      Embedding unit = [&] {
        try {
          return normalize(raw[j]);
        } catch (const Error&) {
          throw Error(Errc::MalformedResponse, "provider returned a zero vector");
        }
      }();
      if (cache_) {
        const auto values = unit.values();
        cache_->put(keys[missing[j]], std::vector<double>(values.begin(), values.end()));
      }
      slots[missing[j]] = std::move(unit);
    }
  }

  std::vector<Embedding> out;
  out.reserve(slots.size());
  for (auto& s : slots) {
    if (!out.empty() && s->dim() != out.front().dim()) {
      throw Error(Errc::DimMismatchAcrossBatch, "cached embedding has a different dimension");
    }
    out.push_back(std::move(*s));
  }
  return out;
}

Embedding EmbeddingService::embed_one(const std::string& text) {
  return std::move(embed(std::span<const std::string>(&text, 1)).front());
}

}  // namespace qae::providers
