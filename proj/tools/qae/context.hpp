#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qae/providers/embedding_service.hpp"
#include "qae/providers/query_generation.hpp"
#include "qae/strategies/strategies.hpp"

namespace CLI {
class App;
}

namespace qae::cli {

/// Options shared by every command.
struct GlobalOptions {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct ProviderOptions {
  std::string embedder = "stub";  // stub | stub-geo | http
  std::size_t embed_dim = 64;
  std::string embed_endpoint = "http://127.0.0.1:8080";
  std::string embed_model;
  double cluster_angle_deg = 15.0;
  double doc_offset_deg = 40.0;
  double inter_center_angle_deg = 90.0;

  std::string generator = "stub";  // stub | http
  std::string gen_endpoint = "https://api.openai.com/v1";
  std::string gen_model = "gpt-4o-mini";
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.95;
  double frequency_penalty = 0.1;

  std::string cache_dir;  // empty: no persistent cache
  std::size_t max_in_flight = 4;
};

struct StrategyOptions {
  std::string strategy = "vanilla";
  double alpha = 0.45;
  double beta = 0.75;
  int n = 10;

  strategies::QaeConfig to_config(std::uint64_t shuffle_seed) const;
};

void add_provider_options(CLI::App& app, ProviderOptions& opts, bool with_generator);
void add_strategy_options(CLI::App& app, StrategyOptions& opts);

/// Seed fan-out from the single --seed value: every consumer gets
/// derive_seed(seed, "cli/<label>").
std::uint64_t component_seed(std::uint64_t root, const std::string& label);

struct Services {
  std::shared_ptr<providers::EmbeddingService> embedder;
  std::shared_ptr<providers::QueryService> queries;  // null unless requested

  nlohmann::json describe() const;
};

/// Builds the configured providers. Caches live in `<cache_dir>/embeddings`
/// and `<cache_dir>/queries`.
Services make_services(const ProviderOptions& opts, const GlobalOptions& global, bool need_generator);

/// Writes text or JSON to `path`, or to stdout when `path` is empty or "-".
void emit(const std::string& path, const std::string& content, std::ostream& out);

/// true when the path ends in ".csv" (case-insensitive).
bool wants_csv(const std::string& path);

std::vector<std::size_t> parse_size_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

}  // namespace qae::cli
