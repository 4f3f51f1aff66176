#include "qae/sweep/sweep.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "qae/core/error.hpp"
#include "qae/core/parallel.hpp"

namespace qae::sweep {
namespace {

using strategies::QaeConfig;
using strategies::Strategy;

bool config_less(const QaeConfig& a, const QaeConfig& b) {
  return std::tuple(static_cast<int>(a.strategy), a.alpha, a.beta) <
         std::tuple(static_cast<int>(b.strategy), b.alpha, b.beta);
}

void sort_points(std::vector<SweepPoint>& points) {
  std::stable_sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) {
    if (a.score != b.score) return a.score > b.score;
    return config_less(a.config, b.config);
  });
}

QaeConfig base_config(const SweepSpec& spec, Strategy s) {
  QaeConfig c;
  c.strategy = s;
  c.n = spec.n;
  c.shuffle_seed = spec.shuffle_seed;
  return c;
}

}  // namespace

std::string_view to_string(Objective o) noexcept { return o == Objective::MRR ? "mrr" : "ndcg"; }

Objective parse_objective(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "mrr") return Objective::MRR;
  if (lower == "ndcg") return Objective::NDCG;
  throw Error(Errc::InvalidArgument, "unknown objective '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  if (strategies.empty()) throw Error(Errc::InvalidArgument, "sweep needs at least one strategy");
  for (Strategy s : strategies) {
    if (s != Strategy::Emb && s != Strategy::Txt && s != Strategy::Hyb) {
      throw Error(Errc::InvalidArgument,
                  "only emb, txt and hyb can be swept, got " + std::string(strategies::to_string(s)));
    }
  }
  auto check_grid = [](const std::vector<double>& g, const char* name) {
    if (g.empty()) throw Error(Errc::InvalidArgument, std::string(name) + " grid is empty");
    if (!std::is_sorted(g.begin(), g.end()) || std::adjacent_find(g.begin(), g.end()) != g.end()) {
      throw Error(Errc::InvalidArgument, std::string(name) + " grid must be strictly ascending");
    }
  };
  check_grid(alpha_grid, "alpha");
  check_grid(beta_grid, "beta");
  if (alpha_grid.front() < 0.0 || alpha_grid.back() > 1.0) {
    throw Error(Errc::AlphaOutOfRange, "alpha grid must lie in [0, 1]");
  }
  if (beta_grid.front() <= 0.0) throw Error(Errc::InvalidArgument, "beta grid must be > 0");
  if (k < 1 || n < 1) throw Error(Errc::InvalidArgument, "k and n must be >= 1");
}

std::vector<QaeConfig> grid_points(const SweepSpec& spec) {
  spec.validate();
  std::vector<QaeConfig> out;
  for (Strategy s : spec.strategies) {
    QaeConfig c = base_config(spec, s);
    switch (s) {
      case Strategy::Emb:
        for (double a : spec.alpha_grid) {
          c.alpha = a;
          out.push_back(c);
        }
        break;
      case Strategy::Txt:
        for (double b : spec.beta_grid) {
          c.beta = b;
          out.push_back(c);
        }
        break;
      default:
        for (double a : spec.alpha_grid) {
          for (double b : spec.beta_grid) {
            c.alpha = a;
            c.beta = b;
            out.push_back(c);
          }
        }
    }
  }
  return out;
}

std::vector<SweepPoint> grid_search(const SweepSpec& spec, const ExperimentFn& experiment) {
  const auto configs = grid_points(spec);
  std::vector<SweepPoint> points(configs.size());
  parallel_for(configs.size(), spec.jobs, [&](std::size_t i) {
    points[i] = {configs[i], experiment(configs[i])};
  });
  sort_points(points);
  return points;
}

std::size_t count_local_maxima(const std::vector<double>& values) {
  std::vector<double> v;
  for (double x : values) {
    if (v.empty() || v.back() != x) v.push_back(x);
  }
  if (v.size() <= 1) return v.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool left = i == 0 || v[i] > v[i - 1];
    const bool right = i + 1 == v.size() || v[i] > v[i + 1];
    if (left && right) ++count;
  }
  return count;
}

TernaryResult ternary_search_alpha(const SweepSpec& spec, const ExperimentFn& experiment) {
  spec.validate();
  if (spec.strategies.size() != 1 ||
      (spec.strategies.front() != Strategy::Emb && spec.strategies.front() != Strategy::Hyb)) {
    throw Error(Errc::InvalidArgument, "ternary search needs exactly one of emb or hyb");
  }
  if (spec.strategies.front() == Strategy::Hyb && spec.beta_grid.size() != 1) {
    throw Error(Errc::InvalidArgument, "ternary search over hyb needs a single beta");
  }
  const auto& grid = spec.alpha_grid;
  QaeConfig cfg = base_config(spec, spec.strategies.front());
  cfg.beta = spec.beta_grid.front();

  std::map<std::size_t, double> seen;
  TernaryResult result;
  auto f = [&](std::size_t i) {
    if (auto it = seen.find(i); it != seen.end()) return it->second;
    cfg.alpha = grid[i];
    const double score = experiment(cfg);
    ++result.evaluations;
    seen.emplace(i, score);
    return score;
  };

  std::size_t lo = 0, hi = grid.size() - 1;
  f(lo);
  f(hi);
  while (hi - lo > 2) {
    const std::size_t m1 = lo + (hi - lo) / 3;
    const std::size_t m2 = hi - (hi - lo) / 3;
    const double f1 = f(m1), f2 = f(m2);
    if (f1 < f2) lo = m1 + 1;
    else if (f1 > f2) hi = m2 - 1;
    else {
      lo = m1;
      hi = m2;
      if (hi - lo <= 2) break;
    }
  }
  for (std::size_t i = lo; i <= hi; ++i) f(i);

  std::vector<double> probed_values;
  for (const auto& [i, score] : seen) probed_values.push_back(score);
  if (count_local_maxima(probed_values) > 1) {
    result.fell_back_to_grid = true;
    for (std::size_t i = 0; i < grid.size(); ++i) f(i);
  }

  for (const auto& [i, score] : seen) {
    QaeConfig c = cfg;
    c.alpha = grid[i];
    result.probed.push_back({c, score});
  }
  // Best probed point; ties go to the smaller alpha.
  result.best = result.probed.front();
  for (const auto& p : result.probed) {
    if (p.score > result.best.score) result.best = p;
  }
  return result;
}

ExperimentFn mean_objective(std::vector<ExperimentFn> experiments) {
  if (experiments.empty()) throw Error(Errc::InvalidArgument, "no experiments to average");
  return [fns = std::move(experiments)](const QaeConfig& c) {
    double sum = 0.0;
    for (const auto& fn : fns) sum += fn(c);
    return sum / static_cast<double>(fns.size());
  };
}

SweepSpec parse_sweep_spec(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::ParseError, "sweep spec is not a JSON object");
  SweepSpec spec;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "strategies") {
        spec.strategies.clear();
        for (const auto& s : value) spec.strategies.push_back(strategies::parse_strategy(s.get<std::string>()));
      } else if (key == "alpha_grid") {
        spec.alpha_grid = value.get<std::vector<double>>();
      } else if (key == "beta_grid") {
        spec.beta_grid = value.get<std::vector<double>>();
      } else if (key == "objective") {
        spec.objective = parse_objective(value.get<std::string>());
      } else if (key == "k") {
        spec.k = value.get<std::size_t>();
      } else if (key == "n") {
        spec.n = value.get<int>();
      } else if (key == "shuffle_seed") {
        spec.shuffle_seed = value.get<std::uint64_t>();
      } else if (key == "jobs") {
        spec.jobs = value.get<std::size_t>();
      } else if (key == "datasets" || key == "mode" || key == "aggregate") {
        // consumed by the CLI
      } else {
        throw Error(Errc::ParseError, "unknown sweep spec key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("sweep spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points, Objective objective) {
  out << "strategy,alpha,beta," << to_string(objective) << '\n';
  char buf[64];
  for (const auto& p : points) {
    out << strategies::to_string(p.config.strategy) << ',';
    if (strategies::uses_alpha(p.config.strategy)) {
      std::snprintf(buf, sizeof buf, "%.6g", p.config.alpha);
      out << buf;
    }
    out << ',';
    if (strategies::uses_beta(p.config.strategy)) {
      std::snprintf(buf, sizeof buf, "%.6g", p.config.beta);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.10f\n", p.score);
    out << buf;
  }
}

}  // namespace qae::sweep
