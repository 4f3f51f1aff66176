#include "qae/providers/cache.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <vector>

#include "qae/core/error.hpp"
#include "qae/providers/sha256.hpp"

namespace qae::providers {

std::string cache_key(const nlohmann::json& canonical_request) {
  return sha256_hex(canonical_request.dump());
}

JsonlCache::JsonlCache(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) {
    throw Error(Errc::IoError, "cannot create cache directory " + directory_.string() + ": " +
                                   ec.message());
  }
  std::vector<std::filesystem::path> shards;
  for (const auto& entry : std::filesystem::directory_iterator(directory_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      shards.push_back(entry.path());
    }
  }
  std::sort(shards.begin(), shards.end());
  for (const auto& shard : shards) {
    std::ifstream in(shard);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto parsed = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("key") ||
          !parsed["key"].is_string() || !parsed.contains("value")) {
        ++corrupt_lines_;
        continue;
      }
      entries_[parsed["key"].get<std::string>()] = std::move(parsed["value"]);
    }
  }
}

std::optional<nlohmann::json> JsonlCache::get(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return std::optional<nlohmann::json>(std::in_place, it->second);
}

void JsonlCache::put(const std::string& key, const nlohmann::json& value) {
  const nlohmann::json line = {{"key", key}, {"value", value}};
  const std::string shard = (key.size() >= 2 ? key.substr(0, 2) : std::string("xx")) + ".jsonl";
  std::unique_lock lock(mutex_);
  std::ofstream out(directory_ / shard, std::ios::app);
  out << line.dump() << '\n';
  out.flush();
  if (!out) throw Error(Errc::IoError, "cannot append to cache shard " + shard);
  entries_[key] = value;
}

std::size_t JsonlCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace qae::providers
