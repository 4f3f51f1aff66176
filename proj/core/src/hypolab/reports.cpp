#include "qae/hypolab/reports.hpp"

#include <cstdio>
#include <string>

namespace qae::hypolab {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_vector(std::ostream& out, const Embedding& e) {
  for (std::size_t i = 0; i < e.dim(); ++i) out << ',' << num(e[i]);
  out << '\n';
}

}  // namespace

void write_angles_csv(std::ostream& out, const AngleReport& report) {
  out << "query_index,angle_deg\n";
  for (std::size_t i = 0; i < report.angles_deg.size(); ++i) {
    out << i << ',' << num(report.angles_deg[i]) << '\n';
  }
}

nlohmann::json to_json(const AngleReport& report) {
  return {{"angles_deg", report.angles_deg},
          {"mean_deg", report.mean_deg},
          {"std_deg", report.std_deg},
          {"band_deg", {report.band_low_deg, report.band_high_deg}},
          {"fraction_in_band", report.fraction_in_band}};
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergencePoint> curve) {
  out << "n,mean_similarity\n";
  for (const auto& p : curve) out << p.n << ',' << num(p.mean_similarity) << '\n';
}

nlohmann::json convergence_json(std::span<const ConvergencePoint> curve) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : curve) rows.push_back({{"n", p.n}, {"mean_similarity", p.mean_similarity}});
  return {{"curve", rows}};
}

void write_mahalanobis_csv(std::ostream& out, const MahalanobisResult& result) {
  out << "point_index,d2\n";
  for (std::size_t i = 0; i < result.d2.size(); ++i) out << i << ',' << num(result.d2[i]) << '\n';
}

nlohmann::json to_json(const MahalanobisResult& result) {
  return {{"d2", result.d2},
          {"subspace_dim", result.subspace_dim},
          {"projected", result.projected},
          {"regularization", result.regularization}};
}

void write_qq_csv(std::ostream& out, std::span<const QqPair> pairs) {
  out << "theoretical_quantile,empirical_quantile\n";
  for (const auto& p : pairs) out << num(p.theoretical) << ',' << num(p.empirical) << '\n';
}

nlohmann::json qq_json(std::span<const QqPair> pairs, int dof) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : pairs) rows.push_back({p.theoretical, p.empirical});
  return {{"dof", dof}, {"pairs", rows}};
}

void write_anderson_darling_csv(std::ostream& out, std::span<const AndersonDarlingResult> results) {
  out << "dimension,a2,a2_star,reject_at_5pct\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    out << i << ',' << num(results[i].a2) << ',' << num(results[i].a2_star) << ','
        << (results[i].reject_at_5pct ? "true" : "false") << '\n';
  }
}

nlohmann::json anderson_darling_json(std::span<const AndersonDarlingResult> results) {
  nlohmann::json rows = nlohmann::json::array();
  std::size_t rejected = 0;
  for (const auto& r : results) {
    rows.push_back({{"a2", r.a2}, {"a2_star", r.a2_star}, {"reject_at_5pct", r.reject_at_5pct}});
    if (r.reject_at_5pct) ++rejected;
  }
  const double frac = results.empty() ? 0.0 : static_cast<double>(rejected) / static_cast<double>(results.size());
  return {{"critical_value_5pct", kAndersonDarlingCritical5pct},
          {"dimensions", rows},
          {"rejected", rejected},
          {"rejected_fraction", frac}};
}

void write_theorem_csv(std::ostream& out, const TheoremReport& report) {
  out << "t,empirical_doc,bound_doc,empirical_mean,bound_mean\n";
  for (const auto& r : report.rows) {
    out << num(r.t) << ',' << num(r.empirical_doc) << ',' << num(r.bound_doc) << ','
        << num(r.empirical_mean) << ',' << num(r.bound_mean) << '\n';
  }
}

nlohmann::json to_json(const TheoremReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  bool within = true;
  for (const auto& r : report.rows) {
    rows.push_back({{"t", r.t},
                    {"empirical_doc", r.empirical_doc},
                    {"bound_doc", r.bound_doc},
                    {"empirical_mean", r.empirical_mean},
                    {"bound_mean", r.bound_mean}});
    within = within && r.empirical_doc <= r.bound_doc && r.empirical_mean <= r.bound_mean;
  }
  return {{"dim", report.dim},
          {"theta_deg", report.theta_deg},
          {"num_samples", report.num_samples},
          {"seed", report.seed},
          {"d_sigma_d", report.d_sigma_d},
          {"mu_sigma_mu", report.mu_sigma_mu},
          {"tails", rows},
          {"within_bounds", within},
          {"positive_fraction", report.positive_fraction},
          {"identity_residual_mean", report.identity_residual_mean},
          {"max_abs_difference", report.max_abs_difference}};
}

void write_cluster_embeddings_csv(std::ostream& out, std::span<const ClusterSample> clusters) {
  const std::size_t dim = clusters.empty() ? 0 : clusters.front().document_vector.dim();
  out << "cluster,role,index";
  for (std::size_t i = 0; i < dim; ++i) out << ",x" << i;
  out << '\n';
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& cl = clusters[c];
    out << c << ",document,0";
    write_vector(out, cl.document_vector);
    for (std::size_t j = 0; j < cl.query_vectors.size(); ++j) {
      out << c << ",query," << j;
      write_vector(out, cl.query_vectors[j]);
    }
    if (!cl.query_vectors.empty()) {
      out << c << ",center,0";
      write_vector(out, cl.center());
    }
  }
}

}  // namespace qae::hypolab
