#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace qae::providers {

/// Content-addressed key: SHA-256 over the compact dump of a JSON object.
/// nlohmann::json keeps object keys sorted, so the dump is canonical.
std::string cache_key(const nlohmann::json& canonical_request);

/// Append-only key/value store backed by JSON-lines files.
///
/// Entries are sharded by the first two hex digits of the key into
/// `<directory>/<kk>.jsonl`; each line is `{"key": ..., "value": ...}`.
/// Reopening a directory replays all shards, later lines winning. Lines that
/// fail to parse (for example a write torn by a crash) are skipped and counted.
/// Concurrent put() calls are allowed; values are deterministic, so racing
/// writers of the same key are harmless.
class JsonlCache {
 public:
  explicit JsonlCache(std::filesystem::path directory);

  std::optional<nlohmann::json> get(const std::string& key) const;
  void put(const std::string& key, const nlohmann::json& value);

  std::size_t size() const;
  std::size_t corrupt_lines() const noexcept { return corrupt_lines_; }
  const std::filesystem::path& directory() const noexcept { return directory_; }

 private:
  std::filesystem::path directory_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, nlohmann::json> entries_;
  std::size_t corrupt_lines_ = 0;
};

}  // namespace qae::providers
