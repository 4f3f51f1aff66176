#include <CLI11.hpp>

#include <memory>
#include <sstream>

#include "qae/commands.hpp"
#include "qae/core/error.hpp"
#include "qae/core/parallel.hpp"
#include "qae/core/rng.hpp"
#include "qae/eval/dataset.hpp"
#include "qae/hypolab/reports.hpp"

namespace qae::cli {
namespace {

using namespace qae::hypolab;

struct SourceArgs {
  std::string corpus;
  std::string doc_id;  // empty: every document
  int n = 10;
  ProviderOptions providers;
};

void add_source_options(CLI::App& sub, SourceArgs& s, int default_n) {
  s.n = default_n;
  sub.add_option("--corpus", s.corpus, "BEIR corpus.jsonl")->check(CLI::ExistingFile);
  sub.add_option("--doc-id", s.doc_id, "Restrict to one document");
  sub.add_option("-n,--num-queries", s.n, "Predicted queries per document")->capture_default_str();
  add_provider_options(sub, s.providers, true);
}

struct Clusters {
  std::vector<std::string> ids;
  std::vector<ClusterSample> samples;
  nlohmann::json providers;
};

Clusters load_clusters(const CommandContext& ctx, const SourceArgs& s) {
  if (s.corpus.empty()) throw Error(Errc::InvalidArgument, "--corpus is required for this source");
  auto corpus = eval::load_corpus(s.corpus);
  if (!s.doc_id.empty()) {
    std::erase_if(corpus, [&](const DocumentRecord& d) { return d.id != s.doc_id; });
    if (corpus.empty()) throw Error(Errc::InvalidArgument, "document '" + s.doc_id + "' not in corpus");
  }
  const Services svc = make_services(s.providers, ctx.global, true);
  Clusters out;
  out.providers = svc.describe();
  out.ids.resize(corpus.size());
  std::vector<std::optional<ClusterSample>> samples(corpus.size());
  parallel_for(corpus.size(), ctx.global.jobs, [&](std::size_t i) {
    const auto& doc = corpus[i];
    const auto pq = svc.queries->generate(doc.id, doc.full_text(), s.n);
    samples[i] = ClusterSample{svc.embedder->embed_one(doc.full_text()), svc.embedder->embed(pq.queries)};
  });
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out.ids[i] = corpus[i].id;
    out.samples.push_back(std::move(*samples[i]));
  }
  return out;
}

/// Points for the distribution tests: query embeddings of one document, or
/// draws from N(0, I).
struct PointsArgs {
  std::string source = "gaussian";
  std::size_t dim = 5;
  std::size_t samples = 10000;
  SourceArgs cluster;
};

void add_points_options(CLI::App& sub, PointsArgs& p) {
  sub.add_option("--source", p.source, "gaussian or corpus")
      ->check(CLI::IsMember({"gaussian", "corpus"}))
      ->capture_default_str();
  sub.add_option("--dim", p.dim, "gaussian: dimension")->capture_default_str();
  sub.add_option("--samples", p.samples, "gaussian: number of draws")->capture_default_str();
  add_source_options(sub, p.cluster, 80);
}

std::vector<Embedding> load_points(const CommandContext& ctx, const PointsArgs& p, nlohmann::json& providers,
                                   const std::string& label) {
  if (p.source == "gaussian") {
    if (p.dim < 1) throw Error(Errc::InvalidArgument, "--dim must be >= 1");
    providers = {{"source", "gaussian"}, {"dim", p.dim}, {"samples", p.samples}};
    return sample_gaussian(Embedding(std::vector<double>(p.dim, 0.0)), Covariance::isotropic(1.0), p.samples,
                           component_seed(ctx.global.seed, "hypo/" + label));
  }
  auto c = load_clusters(ctx, p.cluster);
  if (c.samples.size() != 1) throw Error(Errc::InvalidArgument, "--source corpus needs --doc-id (or a one-document corpus)");
  providers = c.providers;
  return std::move(c.samples.front().query_vectors);
}

void finish(const CommandContext& ctx, const std::string& command, const std::string& out,
            const std::string& content, const nlohmann::json& providers, const std::string& input) {
  emit(out, content, ctx.out);
  if (out.empty() || out == "-") return;
  auto m = ctx.manifest("hypo " + command);
  if (!input.empty()) m.add_input(input);
  m.add_seed("hypo/" + command, component_seed(ctx.global.seed, "hypo/" + command));
  m.add_seed("generator", component_seed(ctx.global.seed, "generator"));
  m.add_seed("embedder", component_seed(ctx.global.seed, "embedder"));
  m.set_providers(providers);
  m.add_output(out);
  m.write_next_to(out);
}

struct AnglesArgs {
  SourceArgs source;
  double band_low = 75.0, band_high = 100.0;
  std::string out;
};

int cmd_angles(CommandContext& ctx, const AnglesArgs& a) {
  const auto c = load_clusters(ctx, a.source);
  std::vector<double> pooled;
  nlohmann::json docs = nlohmann::json::array();
  std::ostringstream csv;
  csv << "document_id,query_index,angle_deg\n";
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const auto r = angle_distribution(c.samples[i], a.band_low, a.band_high);
    docs.push_back({{"document_id", c.ids[i]}, {"mean_deg", r.mean_deg}, {"std_deg", r.std_deg},
                    {"fraction_in_band", r.fraction_in_band}});
    for (std::size_t j = 0; j < r.angles_deg.size(); ++j) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", j, r.angles_deg[j]);
      csv << c.ids[i] << ',' << buf;
    }
    pooled.insert(pooled.end(), r.angles_deg.begin(), r.angles_deg.end());
  }
  const auto all = summarize_angles(std::move(pooled), a.band_low, a.band_high);
  std::string content;
  if (wants_csv(a.out)) {
    content = csv.str();
  } else {
    auto j = hypolab::to_json(all);
    j.erase("angles_deg");
    content = nlohmann::json{{"pooled", j}, {"documents", docs}}.dump(2) + "\n";
  }
  finish(ctx, "angles", a.out, content, c.providers, a.source.corpus);
  return kExitOk;
}

struct McArgs {
  SourceArgs source;
  std::string n_values = "1,2,5,10,20,40,80";
  std::size_t reference_n = 80;
  std::size_t resamples = 50;
  std::string out;
};

int cmd_mc(CommandContext& ctx, McArgs a) {
  a.source.n = static_cast<int>(a.reference_n);
  const auto ns = parse_size_list(a.n_values);
  const auto c = load_clusters(ctx, a.source);
  std::vector<ConvergencePoint> avg;
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const auto curve = mc_convergence(c.samples[i].query_vectors, ns, a.reference_n, a.resamples,
                                      derive_seed(component_seed(ctx.global.seed, "hypo/mc"), i));
    if (avg.empty()) {
      avg = curve;
    } else {
      for (std::size_t k = 0; k < avg.size(); ++k) avg[k].mean_similarity += curve[k].mean_similarity;
    }
  }
  for (auto& p : avg) p.mean_similarity /= static_cast<double>(c.samples.size());
  std::ostringstream csv;
  write_convergence_csv(csv, avg);
  auto j = convergence_json(avg);
  j["documents"] = c.samples.size();
  j["reference_n"] = a.reference_n;
  j["resamples"] = a.resamples;
  finish(ctx, "mc", a.out, wants_csv(a.out) ? csv.str() : j.dump(2) + "\n", c.providers, a.source.corpus);
  return kExitOk;
}

struct DistArgs {
  PointsArgs points;
  double regularization = -1.0;  // < 0: default shrinkage
  bool no_projection = false;
  std::string out;
};

int cmd_qq(CommandContext& ctx, const DistArgs& a) {
  nlohmann::json providers;
  const auto pts = load_points(ctx, a.points, providers, "qq");
  const double reg = a.regularization < 0.0 ? default_regularization(pts) : a.regularization;
  const auto md = mahalanobis_sq(pts, reg, !a.no_projection);
  const auto pairs = chisq_qq(md.d2, static_cast<int>(md.subspace_dim));
  std::ostringstream csv;
  write_qq_csv(csv, pairs);
  auto j = qq_json(pairs, static_cast<int>(md.subspace_dim));
  j["mahalanobis"] = {{"subspace_dim", md.subspace_dim}, {"projected", md.projected}, {"regularization", md.regularization}};
  j["ks_distance"] = ks_statistic(md.d2, [&](double x) { return chi_squared_cdf(x, static_cast<double>(md.subspace_dim)); });
  finish(ctx, "qq", a.out, wants_csv(a.out) ? csv.str() : j.dump(2) + "\n", providers, a.points.cluster.corpus);
  return kExitOk;
}

int cmd_ad(CommandContext& ctx, const DistArgs& a) {
  nlohmann::json providers;
  const auto pts = load_points(ctx, a.points, providers, "ad");
  const auto results = anderson_darling_marginals(pts);
  std::ostringstream csv;
  write_anderson_darling_csv(csv, results);
  finish(ctx, "ad", a.out, wants_csv(a.out) ? csv.str() : anderson_darling_json(results).dump(2) + "\n", providers,
         a.points.cluster.corpus);
  return kExitOk;
}

struct TheoremArgs {
  std::size_t dim = 16;
  double sigma = 0.01;
  double theta = 60.0;
  std::size_t samples = 100000;
  std::string t_values = "0.05,0.1,0.2,0.4";
  std::string out;
};

int cmd_theorem(CommandContext& ctx, const TheoremArgs& a) {
  if (a.dim < 2) throw Error(Errc::InvalidArgument, "--dim must be >= 2");
  const std::uint64_t seed = component_seed(ctx.global.seed, "hypo/theorem");
  Rng rng(derive_seed(seed, "mu"));
  const GaussianSpec spec{random_unit(a.dim, rng), Covariance::isotropic(a.sigma), a.theta};
  const auto ts = parse_real_list(a.t_values);
  const auto report = theorem_check(spec, ts, a.samples, seed);
  std::ostringstream csv;
  write_theorem_csv(csv, report);
  const nlohmann::json providers = {{"source", "gaussian"}, {"dim", a.dim}, {"sigma", a.sigma}};
  finish(ctx, "theorem", a.out, wants_csv(a.out) ? csv.str() : hypolab::to_json(report).dump(2) + "\n", providers, "");
  return kExitOk;
}

struct ExportArgs {
  SourceArgs source;
  std::string out;
};

int cmd_export(CommandContext& ctx, const ExportArgs& a) {
  const auto c = load_clusters(ctx, a.source);
  std::ostringstream csv;
  write_cluster_embeddings_csv(csv, c.samples);
  // Cluster column is positional; map it back to ids in the manifest.
  finish(ctx, "export", a.out, csv.str(), {{"embedding", c.providers}, {"cluster_ids", c.ids}}, a.source.corpus);
  return kExitOk;
}

}  // namespace

void register_hypo_commands(CLI::App& app, CommandContext& ctx, HandlerTable& table) {
  auto* hypo = app.add_subcommand("hypo", "Embedding-geometry and statistics lab");
  hypo->require_subcommand(1);
  {
    auto a = std::make_shared<AnglesArgs>();
    auto* sub = hypo->add_subcommand("angles", "Angles between document offset and query offsets");
    add_source_options(*sub, a->source, 10);
    sub->add_option("--band-low", a->band_low, "Band lower edge (deg)")->capture_default_str();
    sub->add_option("--band-high", a->band_high, "Band upper edge (deg)")->capture_default_str();
    sub->add_option("-o,--out", a->out, "Output .json or .csv (stdout JSON when omitted)");
    table.emplace_back(sub, [&ctx, a] { return cmd_angles(ctx, *a); });
  }
  {
    auto a = std::make_shared<McArgs>();
    auto* sub = hypo->add_subcommand("mc", "Monte Carlo convergence of the query mean");
    add_source_options(*sub, a->source, 80);
    sub->add_option("--n-values", a->n_values, "Comma-separated subset sizes")->capture_default_str();
    sub->add_option("--reference-n", a->reference_n, "Size of the reference set")->capture_default_str();
    sub->add_option("--resamples", a->resamples, "Random subsets per n")->capture_default_str();
    sub->add_option("-o,--out", a->out, "Output .json or .csv");
    table.emplace_back(sub, [&ctx, a] { return cmd_mc(ctx, *a); });
  }
  for (const char* name : {"qq", "ad"}) {
    auto a = std::make_shared<DistArgs>();
    const bool qq = std::string(name) == "qq";
    auto* sub = hypo->add_subcommand(name, qq ? "Mahalanobis D2 against chi-squared quantiles"
                                              : "Anderson-Darling test per dimension");
    add_points_options(*sub, a->points);
    if (qq) {
      sub->add_option("--reg", a->regularization, "Covariance shrinkage (default 1e-6 trace/dim)");
      sub->add_flag("--no-projection", a->no_projection, "Use the full covariance even when singular");
    }
    sub->add_option("-o,--out", a->out, "Output .json or .csv");
    table.emplace_back(sub, [&ctx, a, qq] { return qq ? cmd_qq(ctx, *a) : cmd_ad(ctx, *a); });
  }
  {
    auto a = std::make_shared<TheoremArgs>();
    auto* sub = hypo->add_subcommand("theorem", "Concentration bounds on Gaussian queries");
    sub->add_option("--dim", a->dim, "Dimension")->capture_default_str();
    sub->add_option("--sigma", a->sigma, "Isotropic variance")->capture_default_str();
    sub->add_option("--theta", a->theta, "Angle between mu and d (deg)")->capture_default_str();
    sub->add_option("--samples", a->samples, "Number of draws")->capture_default_str();
    sub->add_option("--t", a->t_values, "Comma-separated deviations")->capture_default_str();
    sub->add_option("-o,--out", a->out, "Output .json or .csv");
    table.emplace_back(sub, [&ctx, a] { return cmd_theorem(ctx, *a); });
  }
  {
    auto a = std::make_shared<ExportArgs>();
    auto* sub = hypo->add_subcommand("export", "Raw cluster embeddings as CSV");
    add_source_options(*sub, a->source, 10);
    sub->add_option("-o,--out", a->out, "CSV output")->required();
    table.emplace_back(sub, [&ctx, a] { return cmd_export(ctx, *a); });
  }
}

}  // namespace qae::cli
