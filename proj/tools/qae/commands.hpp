#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qae/cli.hpp"
#include "qae/context.hpp"
#include "qae/manifest.hpp"

namespace CLI {
class App;
}

namespace qae::cli {

struct CommandContext {
  CLI::App& root;
  GlobalOptions& global;
  const std::vector<std::string>& argv;
  std::ostream& out;
  std::ostream& err;

  /// Manifest pre-filled with the command name, argv, resolved config and root seed.
  RunManifest manifest(const std::string& command) const;
};

using Handler = std::function<int()>;
using HandlerTable = std::vector<std::pair<CLI::App*, Handler>>;

void register_pipeline_commands(CLI::App& app, CommandContext& ctx, HandlerTable& table);
void register_hypo_commands(CLI::App& app, CommandContext& ctx, HandlerTable& table);

}  // namespace qae::cli
