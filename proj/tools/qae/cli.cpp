#include "qae/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "qae/commands.hpp"
#include "qae/core/error.hpp"

namespace qae::cli {

namespace {

// Resolved option values of the root app and the active subcommand chain, in
// the dotted config-file syntax accepted by --config.
std::string config_snapshot(const CLI::App& root) {
  std::vector<const CLI::App*> chain{&root};
  for (;;) {
    const CLI::App* next = nullptr;
    for (const CLI::App* sub : chain.back()->get_subcommands({})) {
      if (sub->parsed()) next = sub;
    }
    if (!next) break;
    chain.push_back(next);
  }
  std::string out, prefix;
  for (const CLI::App* app : chain) {
    if (app != &root) prefix += app->get_name() + ".";
    for (const CLI::Option* opt : app->get_options({})) {
      const std::string& name = opt->get_single_name();
      if (name.empty() || name == "help" || name == "config" || opt->get_lnames().empty()) continue;
      std::string value;
      if (opt->count() > 0) {
        for (const auto& r : opt->reduced_results()) value += (value.empty() ? "" : ",") + r;
      } else {
        value = opt->get_default_str();
      }
      if (opt->get_type_size() == 0) {
        out += prefix + name + "=" + (value.empty() ? "false" : (value == "1" ? "true" : value)) + "\n";
      } else {
        out += prefix + name + "=\"" + value + "\"\n";
      }
    }
  }
  return out;
}

}  // namespace

RunManifest CommandContext::manifest(const std::string& command) const {
  RunManifest m(command, argv);
  m.set_config(config_snapshot(root));
  m.add_seed("root", global.seed);
  return m;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"QAEncoder retrieval engine and embedding-geometry lab", "qae"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Config file (TOML/INI); flags override it");

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Root seed; all randomness derives from it")->capture_default_str();
  app.add_option("-j,--jobs", global.jobs, "Parallel workers")->check(CLI::PositiveNumber)->capture_default_str();

  std::vector<std::string> argv{"qae"};
  argv.insert(argv.end(), args.begin(), args.end());
  CommandContext ctx{app, global, argv, out, err};
  HandlerTable table;
  register_pipeline_commands(app, ctx, table);
  register_hypo_commands(app, ctx, table);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "qae: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    for (auto& [sub, handler] : table) {
      if (sub->parsed()) return handler();
    }
    err << "qae: no command given\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "qae: " << e.what() << "\n";
    switch (classify(e.code())) {
      case ErrorClass::Usage: return kExitUsage;
      case ErrorClass::Provider: return kExitProvider;
      case ErrorClass::Data: return kExitData;
    }
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "qae: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "qae: " << e.what() << "\n";
    return kExitData;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace qae::cli
