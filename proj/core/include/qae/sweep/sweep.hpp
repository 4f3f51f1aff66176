#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qae/strategies/strategies.hpp"

namespace qae::sweep {

enum class Objective { MRR, NDCG };

std::string_view to_string(Objective o) noexcept;
Objective parse_objective(std::string_view name);

/// Search space for QAE_emb / QAE_txt / QAE_hyb hyperparameters. Emb points vary
/// alpha only, Txt points vary beta only, Hyb points cover the alpha x beta grid.
struct SweepSpec {
  std::vector<strategies::Strategy> strategies{strategies::Strategy::Emb, strategies::Strategy::Txt,
                                               strategies::Strategy::Hyb};
  std::vector<double> alpha_grid{strategies::kAlphaGrid.begin(), strategies::kAlphaGrid.end()};
  std::vector<double> beta_grid{strategies::kBetaGrid.begin(), strategies::kBetaGrid.end()};
  Objective objective = Objective::NDCG;
  std::size_t k = 10;
  int n = 10;
  std::uint64_t shuffle_seed = 0;
  std::size_t jobs = 1;

  /// Throws InvalidArgument for empty/unsorted grids or non-sweepable strategies.
  void validate() const;
};

struct SweepPoint {
  strategies::QaeConfig config;
  double score = 0.0;
};

using ExperimentFn = std::function<double(const strategies::QaeConfig&)>;

/// Configurations covered by `spec`, in deterministic order.
std::vector<strategies::QaeConfig> grid_points(const SweepSpec& spec);

/// Evaluates every grid point (up to spec.jobs at a time) and returns them by
/// descending score, ties broken by (strategy, alpha, beta) ascending.
std::vector<SweepPoint> grid_search(const SweepSpec& spec, const ExperimentFn& experiment);

struct TernaryResult {
  SweepPoint best;
  std::size_t evaluations = 0;
  bool fell_back_to_grid = false;
  std::vector<SweepPoint> probed;  // in alpha order
};

/// Discrete ternary search over spec.alpha_grid for a single strategy (Emb or
/// Hyb) and, for Hyb, a single beta.
///
/// The endpoints are probed first, then the bracket shrinks by thirds; every
/// grid point is evaluated at most once. Unimodality is an assumption: when
/// the probed values have more than one local maximum, the remaining grid
/// points are evaluated and the grid maximum is returned with
/// fell_back_to_grid set.
TernaryResult ternary_search_alpha(const SweepSpec& spec, const ExperimentFn& experiment);

/// Number of strict local maxima in a sequence (plateaus count once).
std::size_t count_local_maxima(const std::vector<double>& values);

/// Mean of several experiment functions, for sweeping a shared setting over
/// multiple datasets.
ExperimentFn mean_objective(std::vector<ExperimentFn> experiments);

/// JSON sweep spec; see docs/formats.md for the schema. Keys not listed there
/// are rejected.
SweepSpec parse_sweep_spec(const std::string& json_text);

/// CSV with header `strategy,alpha,beta,<objective>`; alpha/beta are empty
/// when the strategy does not use them.
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points, Objective objective);

}  // namespace qae::sweep
