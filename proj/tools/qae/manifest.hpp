#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qae::cli {

/// Replay record written next to every output as `<output>.manifest.json`.
/// `config` is the fully resolved option set in the tool's config-file
/// syntax, so `qae <command> --config <file>` re-runs the command.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv);

  void set_config(std::string config_text) { config_ = std::move(config_text); }
  void add_seed(const std::string& name, std::uint64_t value) { seeds_[name] = value; }
  void set_providers(nlohmann::json providers) { providers_ = std::move(providers); }
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void set_extra(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

  nlohmann::json to_json() const;
  /// Writes `<output>.manifest.json` atomically.
  void write_next_to(const std::filesystem::path& output) const;

  static std::filesystem::path path_for(const std::filesystem::path& output);

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::string config_;
  nlohmann::json seeds_ = nlohmann::json::object();
  nlohmann::json providers_ = nlohmann::json::object();
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json outputs_ = nlohmann::json::array();
  nlohmann::json extra_ = nlohmann::json::object();
  std::chrono::steady_clock::time_point started_;
  std::string started_at_;
};

std::string utc_timestamp();

}  // namespace qae::cli
