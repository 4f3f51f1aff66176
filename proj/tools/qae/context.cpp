#include "qae/context.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qae/core/error.hpp"
#include "qae/core/io.hpp"
#include "qae/core/rng.hpp"
#include "qae/providers/http_providers.hpp"
#include "qae/providers/stub_embedder.hpp"

namespace qae::cli {

strategies::QaeConfig StrategyOptions::to_config(std::uint64_t shuffle_seed) const {
  strategies::QaeConfig cfg;
  cfg.strategy = strategies::parse_strategy(strategy);
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.n = n;
  cfg.shuffle_seed = shuffle_seed;
  cfg.validate();
  return cfg;
}

void add_provider_options(CLI::App& app, ProviderOptions& o, bool with_generator) {
  app.add_option("--embedder", o.embedder, "Embedding provider: stub, stub-geo or http")
      ->check(CLI::IsMember({"stub", "stub-geo", "http"}))
      ->capture_default_str();
  app.add_option("--embed-dim", o.embed_dim, "Stub embedding dimension")->capture_default_str();
  app.add_option("--embed-endpoint", o.embed_endpoint, "HTTP embedding service base URL")
      ->capture_default_str();
  app.add_option("--embed-model", o.embed_model, "Model name sent to the HTTP embedding service");
  app.add_option("--cluster-angle", o.cluster_angle_deg, "stub-geo: RMS query-to-center angle (deg)")
      ->capture_default_str();
  app.add_option("--doc-offset", o.doc_offset_deg, "stub-geo: document-to-center angle (deg)")
      ->capture_default_str();
  app.add_option("--inter-center", o.inter_center_angle_deg, "stub-geo: mean angle between centers (deg)")
      ->capture_default_str();
  app.add_option("--cache-dir", o.cache_dir, "Directory for the embedding and query caches");
  app.add_option("--max-in-flight", o.max_in_flight, "Concurrent provider calls")->capture_default_str();
  if (!with_generator) return;
  app.add_option("--generator", o.generator, "Query generator: stub or http")
      ->check(CLI::IsMember({"stub", "http"}))
      ->capture_default_str();
  app.add_option("--gen-endpoint", o.gen_endpoint, "Chat-completions base URL")->capture_default_str();
  app.add_option("--gen-model", o.gen_model, "Chat model")->capture_default_str();
  app.add_option("--api-key-env", o.api_key_env, "Environment variable holding the API key")
      ->capture_default_str();
  app.add_option("--temperature", o.temperature, "Sampling temperature")->capture_default_str();
  app.add_option("--frequency-penalty", o.frequency_penalty, "Frequency penalty")->capture_default_str();
}

void add_strategy_options(CLI::App& app, StrategyOptions& o) {
  app.add_option("--strategy", o.strategy, "vanilla, base, emb, txt, hyb or naive")->capture_default_str();
  app.add_option("--alpha", o.alpha, "Interpolation weight (emb, hyb)")->capture_default_str();
  app.add_option("--beta", o.beta, "Query-to-document length ratio (txt, hyb)")->capture_default_str();
  app.add_option("-n,--num-queries", o.n, "Predicted queries per document")->capture_default_str();
}

std::uint64_t component_seed(std::uint64_t root, const std::string& label) {
  return derive_seed(root, "cli/" + label);
}

nlohmann::json Services::describe() const {
  nlohmann::json j = {{"embedder", {{"id", embedder->provider_id()}, {"model", embedder->model_id()}}}};
  if (queries) j["generator"] = {{"id", queries->generator_id()}, {"model", queries->model_id()}};
  return j;
}

Services make_services(const ProviderOptions& o, const GlobalOptions& g, bool need_generator) {
  std::shared_ptr<providers::JsonlCache> emb_cache, query_cache;
  if (!o.cache_dir.empty()) {
    emb_cache = std::make_shared<providers::JsonlCache>(std::filesystem::path(o.cache_dir) / "embeddings");
    query_cache = std::make_shared<providers::JsonlCache>(std::filesystem::path(o.cache_dir) / "queries");
  }

  std::shared_ptr<providers::EmbeddingProvider> provider;
  const std::uint64_t embed_seed = component_seed(g.seed, "embedder");
  if (o.embedder == "http") {
    provider = std::make_shared<providers::HttpEmbeddingProvider>(o.embed_endpoint, o.embed_model);
  } else if (o.embedder == "stub-geo") {
    provider = std::make_shared<providers::StubEmbedder>(
        o.embed_dim, embed_seed,
        providers::GeometricConfig{o.cluster_angle_deg, o.doc_offset_deg, o.inter_center_angle_deg});
  } else {
    provider = std::make_shared<providers::StubEmbedder>(o.embed_dim, embed_seed);
  }

  Services s;
  s.embedder = std::make_shared<providers::EmbeddingService>(provider, emb_cache, providers::RetryPolicy{},
                                                             o.max_in_flight);
  if (need_generator) {
    const std::uint64_t gen_seed = component_seed(g.seed, "generator");
    std::shared_ptr<providers::QueryGenerator> gen;
    if (o.generator == "http") {
      gen = std::make_shared<providers::HttpChatQueryGenerator>(o.gen_endpoint, o.gen_model, o.api_key_env);
    } else {
      gen = std::make_shared<providers::StubQueryGenerator>(gen_seed);
    }
    providers::QueryService::Options qo;
    qo.temperature = o.temperature;
    qo.frequency_penalty = o.frequency_penalty;
    qo.seed = gen_seed;
    qo.max_in_flight = o.max_in_flight;
    s.queries = std::make_shared<providers::QueryService>(gen, query_cache, qo);
  }
  return s;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  write_file_atomic(path, content);
}

bool wants_csv(const std::string& path) {
  if (path.size() < 4) return false;
  std::string ext = path.substr(path.size() - 4);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv";
}

namespace {

template <class T, class Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(parse(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidArgument, "bad list element '" + item + "'");
    }
  }
  if (out.empty()) throw Error(Errc::InvalidArgument, "empty list '" + text + "'");
  return out;
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string& text) {
  return parse_list<std::size_t>(text, [](const std::string& s, std::size_t* used) {
    if (!s.empty() && s.front() == '-') throw std::invalid_argument(s);
    return static_cast<std::size_t>(std::stoull(s, used));
  });
}

std::vector<double> parse_real_list(const std::string& text) {
  return parse_list<double>(text, [](const std::string& s, std::size_t* used) { return std::stod(s, used); });
}

}  // namespace qae::cli
