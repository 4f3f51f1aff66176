#include "qae/manifest.hpp"

#include <ctime>

#include "qae/core/io.hpp"
#include "qae/providers/sha256.hpp"

namespace qae::cli {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)),
      argv_(std::move(argv)),
      started_(std::chrono::steady_clock::now()),
      started_at_(utc_timestamp()) {}

void RunManifest::add_input(const std::filesystem::path& path) {
  nlohmann::json entry = {{"path", path.string()}};
  if (std::filesystem::is_regular_file(path)) {
    entry["sha256"] = providers::sha256_hex(read_file(path));
  }
  inputs_.push_back(std::move(entry));
}

void RunManifest::add_output(const std::filesystem::path& path) { outputs_.push_back(path.string()); }

nlohmann::json RunManifest::to_json() const {
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  nlohmann::json j = {{"command", command_},
                      {"argv", argv_},
                      {"config", config_},
                      {"seeds", seeds_},
                      {"providers", providers_},
                      {"inputs", inputs_},
                      {"outputs", outputs_},
                      {"timings", {{"started_at", started_at_}, {"wall_clock_seconds", seconds}}}};
  if (!extra_.empty()) j["details"] = extra_;
  return j;
}

std::filesystem::path RunManifest::path_for(const std::filesystem::path& output) {
  auto p = output;
  p += ".manifest.json";
  return p;
}

void RunManifest::write_next_to(const std::filesystem::path& output) const {
  write_file_atomic(path_for(output), to_json().dump(2) + "\n");
}

}  // namespace qae::cli
