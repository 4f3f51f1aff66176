#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>

#include "qae/commands.hpp"
#include "qae/core/error.hpp"
#include "qae/core/io.hpp"
#include "qae/core/parallel.hpp"
#include "qae/eval/dataset.hpp"
#include "qae/eval/experiment.hpp"
#include "qae/eval/synthetic.hpp"
#include "qae/index/flat_index.hpp"
#include "qae/sweep/sweep.hpp"

namespace qae::cli {
namespace {

namespace fs = std::filesystem;

struct SynthArgs {
  std::string kind = "geometric";
  std::size_t docs = 100;
  std::size_t heldout = 1;
  std::string out_dir;
};

int cmd_synth(CommandContext& ctx, const SynthArgs& a) {
  const eval::Dataset ds =
      a.kind == "identity" ? eval::make_identity_dataset(a.docs) : eval::make_geometric_dataset(a.docs, a.heldout);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  eval::write_corpus(dir / "corpus.jsonl", ds.corpus);
  eval::write_queries(dir / "queries.jsonl", ds.queries);
  eval::write_qrels(dir / "qrels.tsv", ds.qrels);
  auto m = ctx.manifest("synth");
  for (const char* f : {"corpus.jsonl", "queries.jsonl", "qrels.tsv"}) m.add_output(dir / f);
  m.write_next_to(dir / "synth");
  ctx.out << "wrote " << ds.corpus.size() << " documents, " << ds.queries.size() << " queries to "
          << dir.string() << "\n";
  return kExitOk;
}

struct GenQueriesArgs {
  std::string corpus;
  int n = 10;
  double max_failure_fraction = 0.05;
  std::string report;
  ProviderOptions providers;
};

int cmd_genqueries(CommandContext& ctx, const GenQueriesArgs& a) {
  if (a.providers.cache_dir.empty()) throw Error(Errc::InvalidArgument, "genqueries needs --cache-dir");
  if (a.n < 1) throw Error(Errc::InvalidArgument, "-n must be >= 1");
  const auto corpus = eval::load_corpus(a.corpus);
  const Services s = make_services(a.providers, ctx.global, true);

  std::atomic<std::size_t> cached{0}, generated{0};
  std::mutex mu;
  nlohmann::json failures = nlohmann::json::array();
  nlohmann::json shortfalls = nlohmann::json::array();
  parallel_for(corpus.size(), ctx.global.jobs, [&](std::size_t i) {
    const auto& doc = corpus[i];
    const std::string text = doc.full_text();
    if (s.queries->is_cached(text, a.n)) {
      ++cached;
      return;
    }
    try {
      const auto pq = s.queries->generate(doc.id, text, a.n);
      ++generated;
      if (pq.shortfall > 0) {
        std::lock_guard lock(mu);
        shortfalls.push_back({{"document_id", doc.id}, {"shortfall", pq.shortfall}});
      }
    } catch (const Error& e) {
      if (classify(e.code()) == ErrorClass::Usage) throw;
      std::lock_guard lock(mu);
      failures.push_back({{"document_id", doc.id}, {"error", std::string(to_string(e.code()))},
                          {"message", e.what()}});
    }
  });
  auto by_id = [](const nlohmann::json& x, const nlohmann::json& y) { return x["document_id"] < y["document_id"]; };
  std::sort(failures.begin(), failures.end(), by_id);
  std::sort(shortfalls.begin(), shortfalls.end(), by_id);

  const double fraction = corpus.empty() ? 0.0 : static_cast<double>(failures.size()) / static_cast<double>(corpus.size());
  const nlohmann::json summary = {{"documents", corpus.size()},   {"cached", cached.load()},
                                  {"generated", generated.load()}, {"failed", failures.size()},
                                  {"failure_fraction", fraction},  {"generator_calls", s.queries->generator_calls()},
                                  {"failures", failures},          {"shortfalls", shortfalls}};
  ctx.out << "genqueries: " << corpus.size() << " documents, " << cached.load() << " cached, "
          << generated.load() << " generated, " << failures.size() << " failed, "
          << s.queries->generator_calls() << " generator calls\n";
  for (const auto& f : failures) {
    ctx.err << "  skipped " << f["document_id"].get<std::string>() << ": " << f["message"].get<std::string>() << "\n";
  }

  auto m = ctx.manifest("genqueries");
  m.add_input(a.corpus);
  m.add_seed("generator", component_seed(ctx.global.seed, "generator"));
  m.set_providers(s.describe());
  m.add_output(fs::path(a.providers.cache_dir) / "queries");
  m.set_extra("summary", summary);
  if (!a.report.empty()) {
    emit(a.report, summary.dump(2) + "\n", ctx.out);
    m.add_output(a.report);
    m.write_next_to(a.report);
  } else {
    m.write_next_to(fs::path(a.providers.cache_dir) / "genqueries");
  }
  if (fraction > a.max_failure_fraction) {
    ctx.err << "qae: failure fraction " << fraction << " exceeds " << a.max_failure_fraction << "\n";
    return kExitProvider;
  }
  return kExitOk;
}

struct IndexArgs {
  std::string corpus;
  std::string out;
  StrategyOptions strategy;
  ProviderOptions providers;
};

int cmd_index(CommandContext& ctx, const IndexArgs& a) {
  eval::Dataset ds;
  ds.corpus = eval::load_corpus(a.corpus);
  const auto cfg = a.strategy.to_config(component_seed(ctx.global.seed, "txt"));
  const Services s = make_services(a.providers, ctx.global, strategies::uses_queries(cfg.strategy));
  eval::PreparedExperiment ex(ds, {s.embedder.get(), s.queries.get()}, 10, false, ctx.global.jobs);
  std::vector<eval::SkippedDocument> skipped;
  const auto index = ex.build_index(cfg, &skipped);
  const auto parent = fs::path(a.out).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  index.save(a.out);

  ctx.out << "index: " << index.entry_count() << " entries, " << index.document_count() << " documents, dim "
          << index.dim() << ", " << index.vector_bytes() << " vector bytes, " << index.serialized_bytes()
          << " serialized bytes\n";
  nlohmann::json skip = nlohmann::json::array();
  for (const auto& sd : skipped) {
    ctx.err << "  skipped " << sd.document_id << ": " << sd.reason << "\n";
    skip.push_back({{"document_id", sd.document_id}, {"reason", sd.reason}});
  }

  auto m = ctx.manifest("index");
  m.add_input(a.corpus);
  m.add_seed("embedder", component_seed(ctx.global.seed, "embedder"));
  m.add_seed("generator", component_seed(ctx.global.seed, "generator"));
  m.add_seed("txt_shuffle", cfg.shuffle_seed);
  m.set_providers(s.describe());
  m.add_output(a.out);
  m.add_output(index::FlatIndex::sidecar_path(a.out));
  m.set_extra("strategy", {{"strategy", strategies::to_string(cfg.strategy)},
                           {"alpha", cfg.alpha},
                           {"beta", cfg.beta},
                           {"n", cfg.n},
                           {"shuffle_seed", cfg.shuffle_seed}});
  m.set_extra("index", {{"entries", index.entry_count()},
                        {"documents", index.document_count()},
                        {"vector_bytes", index.vector_bytes()},
                        {"serialized_bytes", index.serialized_bytes()}});
  m.set_extra("skipped_documents", skip);
  m.write_next_to(a.out);
  return kExitOk;
}

struct SearchArgs {
  std::string index;
  std::string query;
  std::string queries;
  std::size_t k = 10;
  std::string out;
  ProviderOptions providers;
};

int cmd_search(CommandContext& ctx, const SearchArgs& a) {
  if (a.query.empty() == a.queries.empty()) {
    throw Error(Errc::InvalidArgument, "give exactly one of --query or --queries");
  }
  const auto index = index::FlatIndex::load(a.index);
  std::vector<eval::Query> queries;
  if (!a.query.empty()) {
    queries.push_back({"query", a.query});
  } else {
    queries = eval::load_queries(a.queries);
  }
  const Services s = make_services(a.providers, ctx.global, false);
  std::vector<std::string> texts;
  for (const auto& q : queries) texts.push_back(q.text);
  const auto vectors = s.embedder->embed(texts);

  nlohmann::json results = nlohmann::json::array();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    nlohmann::json hits = nlohmann::json::array();
    for (const auto& h : index.search(vectors[i], a.k)) hits.push_back({{"document_id", h.document_id}, {"score", h.score}});
    results.push_back({{"query_id", queries[i].id}, {"text", queries[i].text}, {"hits", hits}});
  }
  emit(a.out, nlohmann::json{{"k", a.k}, {"results", results}}.dump(2) + "\n", ctx.out);
  if (!a.out.empty() && a.out != "-") {
    auto m = ctx.manifest("search");
    m.add_input(a.index);
    if (!a.queries.empty()) m.add_input(a.queries);
    m.set_providers(s.describe());
    m.add_output(a.out);
    m.write_next_to(a.out);
  }
  return kExitOk;
}

struct EvalArgs {
  std::string corpus, queries, qrels;
  std::size_t k = 10;
  std::string out;
  StrategyOptions strategy;
  ProviderOptions providers;
};

int cmd_eval(CommandContext& ctx, const EvalArgs& a) {
  const auto ds = eval::load_dataset(a.corpus, a.queries, a.qrels);
  const auto cfg = a.strategy.to_config(component_seed(ctx.global.seed, "txt"));
  const Services s = make_services(a.providers, ctx.global, strategies::uses_queries(cfg.strategy));
  eval::PreparedExperiment ex(ds, {s.embedder.get(), s.queries.get()}, a.k, true, ctx.global.jobs);
  const auto report = ex.run(cfg);
  const std::string text = eval::to_json(report).dump(2) + "\n";
  emit(a.out, text, ctx.out);
  char line[160];
  std::snprintf(line, sizeof line, "eval %s: MRR@%zu %.6f  NDCG@%zu %.6f over %zu queries\n",
                std::string(strategies::to_string(cfg.strategy)).c_str(), a.k, report.metrics.mrr, a.k,
                report.metrics.ndcg, report.metrics.num_queries);
  (a.out.empty() || a.out == "-" ? ctx.err : ctx.out) << line;
  if (!a.out.empty() && a.out != "-") {
    auto m = ctx.manifest("eval");
    for (const auto& p : {a.corpus, a.queries, a.qrels}) m.add_input(p);
    m.add_seed("embedder", component_seed(ctx.global.seed, "embedder"));
    m.add_seed("generator", component_seed(ctx.global.seed, "generator"));
    m.add_seed("txt_shuffle", cfg.shuffle_seed);
    m.set_providers(s.describe());
    m.add_output(a.out);
    m.write_next_to(a.out);
  }
  return kExitOk;
}

struct SweepArgs {
  std::string spec;
  std::string corpus, queries, qrels;
  std::string out;
  ProviderOptions providers;
};

struct DatasetPaths {
  std::string corpus, queries, qrels;
};

int cmd_sweep(CommandContext& ctx, const SweepArgs& a) {
  const std::string spec_text = read_file(a.spec);
  auto spec = sweep::parse_sweep_spec(spec_text);
  const auto raw = nlohmann::json::parse(spec_text);
  if (!raw.contains("jobs")) spec.jobs = ctx.global.jobs;
  if (!raw.contains("shuffle_seed")) spec.shuffle_seed = component_seed(ctx.global.seed, "txt");
  const std::string mode = raw.value("mode", std::string("grid"));
  if (mode != "grid" && mode != "ternary") throw Error(Errc::ParseError, "sweep mode must be grid or ternary");
  if (raw.contains("aggregate") && raw["aggregate"] != "mean") {
    throw Error(Errc::ParseError, "sweep aggregate must be \"mean\"");
  }

  std::vector<DatasetPaths> paths;
  const fs::path base = fs::path(a.spec).parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (base / p).string(); };
  if (raw.contains("datasets")) {
    for (const auto& d : raw["datasets"]) {
      paths.push_back({resolve(d.at("corpus").get<std::string>()), resolve(d.at("queries").get<std::string>()),
                       resolve(d.at("qrels").get<std::string>())});
    }
  } else {
    if (a.corpus.empty() || a.queries.empty() || a.qrels.empty()) {
      throw Error(Errc::InvalidArgument, "sweep needs datasets in the spec or --corpus/--queries/--qrels");
    }
    paths.push_back({a.corpus, a.queries, a.qrels});
  }

  bool need_generator = false;
  for (auto st : spec.strategies) need_generator = need_generator || strategies::uses_queries(st);
  const Services s = make_services(a.providers, ctx.global, need_generator);
  std::vector<std::unique_ptr<eval::Dataset>> datasets;
  std::vector<std::unique_ptr<eval::PreparedExperiment>> experiments;
  std::vector<sweep::ExperimentFn> fns;
  for (const auto& p : paths) {
    datasets.push_back(std::make_unique<eval::Dataset>(eval::load_dataset(p.corpus, p.queries, p.qrels)));
    experiments.push_back(std::make_unique<eval::PreparedExperiment>(
        *datasets.back(), eval::ExperimentProviders{s.embedder.get(), s.queries.get()}, spec.k, true, 1));
    auto* ex = experiments.back().get();
    const auto objective = spec.objective;
    fns.push_back([ex, objective](const strategies::QaeConfig& cfg) {
      const auto r = ex->run(cfg);
      return objective == sweep::Objective::MRR ? r.metrics.mrr : r.metrics.ndcg;
    });
  }
  const auto objective_fn = fns.size() == 1 ? fns.front() : sweep::mean_objective(fns);

  std::vector<sweep::SweepPoint> points;
  nlohmann::json details;
  if (mode == "ternary") {
    const auto t = sweep::ternary_search_alpha(spec, objective_fn);
    points = t.probed;
    details = {{"mode", "ternary"}, {"evaluations", t.evaluations}, {"fell_back_to_grid", t.fell_back_to_grid},
               {"best_alpha", t.best.config.alpha}, {"best_score", t.best.score}};
    ctx.err << "ternary: best alpha " << t.best.config.alpha << " score " << t.best.score << " after "
            << t.evaluations << " evaluations" << (t.fell_back_to_grid ? " (grid fallback)" : "") << "\n";
  } else {
    points = sweep::grid_search(spec, objective_fn);
    details = {{"mode", "grid"}, {"points", points.size()}};
  }
  std::ostringstream csv;
  sweep::write_sweep_csv(csv, points, spec.objective);
  emit(a.out, csv.str(), ctx.out);
  if (!a.out.empty() && a.out != "-") {
    auto m = ctx.manifest("sweep");
    m.add_input(a.spec);
    for (const auto& p : paths) {
      m.add_input(p.corpus);
      m.add_input(p.queries);
      m.add_input(p.qrels);
    }
    m.add_seed("embedder", component_seed(ctx.global.seed, "embedder"));
    m.add_seed("generator", component_seed(ctx.global.seed, "generator"));
    m.add_seed("txt_shuffle", spec.shuffle_seed);
    m.set_providers(s.describe());
    m.add_output(a.out);
    m.set_extra("sweep", details);
    m.write_next_to(a.out);
  }
  return kExitOk;
}

}  // namespace

void register_pipeline_commands(CLI::App& app, CommandContext& ctx, HandlerTable& table) {
  {
    auto a = std::make_shared<SynthArgs>();
    auto* sub = app.add_subcommand("synth", "Write a synthetic corpus/queries/qrels set");
    sub->add_option("--kind", a->kind, "geometric (for --embedder stub-geo) or identity")
        ->check(CLI::IsMember({"geometric", "identity"}))
        ->capture_default_str();
    sub->add_option("--docs", a->docs, "Number of documents")->capture_default_str();
    sub->add_option("--heldout", a->heldout, "Held-out queries per document (geometric)")->capture_default_str();
    sub->add_option("--out-dir", a->out_dir, "Output directory")->required();
    table.emplace_back(sub, [&ctx, a] { return cmd_synth(ctx, *a); });
  }
  {
    auto a = std::make_shared<GenQueriesArgs>();
    auto* sub = app.add_subcommand("genqueries", "Generate and cache predicted queries for a corpus");
    sub->add_option("--corpus", a->corpus, "BEIR corpus.jsonl")->required()->check(CLI::ExistingFile);
    sub->add_option("-n,--num-queries", a->n, "Questions per document")->capture_default_str();
    sub->add_option("--max-failure-fraction", a->max_failure_fraction,
                    "Exit with status 3 when more documents than this fraction fail")
        ->capture_default_str();
    sub->add_option("--report", a->report, "Write the failure/skip summary as JSON");
    add_provider_options(*sub, a->providers, true);
    table.emplace_back(sub, [&ctx, a] { return cmd_genqueries(ctx, *a); });
  }
  {
    auto a = std::make_shared<IndexArgs>();
    auto* sub = app.add_subcommand("index", "Build a flat index for one strategy");
    sub->add_option("--corpus", a->corpus, "BEIR corpus.jsonl")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", a->out, "Index path")->required();
    add_strategy_options(*sub, a->strategy);
    add_provider_options(*sub, a->providers, true);
    table.emplace_back(sub, [&ctx, a] { return cmd_index(ctx, *a); });
  }
  {
    auto a = std::make_shared<SearchArgs>();
    auto* sub = app.add_subcommand("search", "Query a saved index");
    sub->add_option("--index", a->index, "Index path")->required()->check(CLI::ExistingFile);
    sub->add_option("--query", a->query, "Query text");
    sub->add_option("--queries", a->queries, "BEIR queries.jsonl")->check(CLI::ExistingFile);
    sub->add_option("-k", a->k, "Results per query")->capture_default_str();
    sub->add_option("-o,--out", a->out, "Results JSON (stdout when omitted)");
    add_provider_options(*sub, a->providers, false);
    table.emplace_back(sub, [&ctx, a] { return cmd_search(ctx, *a); });
  }
  {
    auto a = std::make_shared<EvalArgs>();
    auto* sub = app.add_subcommand("eval", "Index, search and score one configuration");
    sub->add_option("--corpus", a->corpus, "BEIR corpus.jsonl")->required()->check(CLI::ExistingFile);
    sub->add_option("--queries", a->queries, "BEIR queries.jsonl")->required()->check(CLI::ExistingFile);
    sub->add_option("--qrels", a->qrels, "BEIR qrels TSV")->required()->check(CLI::ExistingFile);
    sub->add_option("-k", a->k, "Metric cutoff")->capture_default_str();
    sub->add_option("-o,--out", a->out, "Report JSON (stdout when omitted)");
    add_strategy_options(*sub, a->strategy);
    add_provider_options(*sub, a->providers, true);
    table.emplace_back(sub, [&ctx, a] { return cmd_eval(ctx, *a); });
  }
  {
    auto a = std::make_shared<SweepArgs>();
    auto* sub = app.add_subcommand("sweep", "Grid or ternary search over alpha/beta");
    sub->add_option("--spec", a->spec, "Sweep spec JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--corpus", a->corpus, "BEIR corpus.jsonl (when the spec has no datasets)");
    sub->add_option("--queries", a->queries, "BEIR queries.jsonl");
    sub->add_option("--qrels", a->qrels, "BEIR qrels TSV");
    sub->add_option("-o,--out", a->out, "CSV output (stdout when omitted)");
    add_provider_options(*sub, a->providers, true);
    table.emplace_back(sub, [&ctx, a] { return cmd_sweep(ctx, *a); });
  }
}

}  // namespace qae::cli
