#pragma once

#include <ostream>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "qae/hypolab/angles.hpp"
#include "qae/hypolab/chi_squared.hpp"
#include "qae/hypolab/convergence.hpp"
#include "qae/hypolab/mahalanobis.hpp"
#include "qae/hypolab/normality.hpp"
#include "qae/hypolab/theorem.hpp"

// Plot-ready emitters: one CSV row per angle, curve point, quantile pair,
// dimension or t value. Reals are printed with 17 significant digits.
namespace qae::hypolab {

void write_angles_csv(std::ostream& out, const AngleReport& report);
nlohmann::json to_json(const AngleReport& report);

void write_convergence_csv(std::ostream& out, std::span<const ConvergencePoint> curve);
nlohmann::json convergence_json(std::span<const ConvergencePoint> curve);

void write_mahalanobis_csv(std::ostream& out, const MahalanobisResult& result);
nlohmann::json to_json(const MahalanobisResult& result);

void write_qq_csv(std::ostream& out, std::span<const QqPair> pairs);
nlohmann::json qq_json(std::span<const QqPair> pairs, int dof);

void write_anderson_darling_csv(std::ostream& out, std::span<const AndersonDarlingResult> results);
nlohmann::json anderson_darling_json(std::span<const AndersonDarlingResult> results);

void write_theorem_csv(std::ostream& out, const TheoremReport& report);
nlohmann::json to_json(const TheoremReport& report);

/// Raw vectors for external projection tools: columns cluster,role,index,x0..;
/// role is "document", "query" or "center".
void write_cluster_embeddings_csv(std::ostream& out, std::span<const ClusterSample> clusters);

}  // namespace qae::hypolab
