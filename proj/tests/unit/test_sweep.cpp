#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qae/core/error.hpp"
#include "qae/eval/experiment.hpp"
#include "qae/eval/synthetic.hpp"
#include "qae/providers/embedding_service.hpp"
#include "qae/providers/query_generation.hpp"
#include "qae/providers/stub_embedder.hpp"
#include "qae/sweep/sweep.hpp"

using qae::strategies::QaeConfig;
using qae::strategies::Strategy;
using namespace qae::sweep;

namespace {

SweepSpec only(Strategy s) {
  SweepSpec spec;
  spec.strategies = {s};
  return spec;
}

std::size_t alpha_index(double alpha) {
  const auto& g = qae::strategies::kAlphaGrid;
  return static_cast<std::size_t>(std::find(g.begin(), g.end(), alpha) - g.begin());
}

// Curve over the 7-point grid as an experiment function that counts calls.
struct Curve {
  std::vector<double> values;
  mutable int calls = 0;
  ExperimentFn fn() const {
    return [this](const QaeConfig& c) {
      ++calls;
      return values.at(alpha_index(c.alpha));
    };
  }
};

// Strictly unimodal: rising to a random peak, then falling.
std::vector<double> random_unimodal(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> peak_dist(0, 6);
  std::uniform_real_distribution<double> step(0.001, 0.2);
  const int peak = peak_dist(gen);
  std::vector<double> v(7);
  v[peak] = 1.0;
  for (int i = peak - 1; i >= 0; --i) v[i] = v[i + 1] - step(gen);
  for (int i = peak + 1; i < 7; ++i) v[i] = v[i - 1] - step(gen);
  return v;
}

struct GeoStack {
  GeoStack(std::uint64_t seed, qae::providers::GeometricConfig geo)
      : stub(std::make_shared<qae::providers::StubEmbedder>(64, seed, geo)),
        embedder(stub, nullptr, qae::providers::RetryPolicy::immediate()),
        queries(std::make_shared<qae::providers::StubQueryGenerator>(seed), nullptr) {}
  std::shared_ptr<qae::providers::StubEmbedder> stub;
  qae::providers::EmbeddingService embedder;
  qae::providers::QueryService queries;
};

}  // namespace

TEST(SweepSpecTest, DefaultsAreTheStandardGrids) {
  const SweepSpec spec;
  EXPECT_EQ(spec.alpha_grid, (std::vector<double>{0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9}));
  EXPECT_EQ(spec.beta_grid, (std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.25, 1.5}));
  EXPECT_EQ(spec.k, 10u);
  EXPECT_EQ(spec.n, 10);
}

TEST(SweepSpecTest, ValidationRejectsBadGrids) {
  SweepSpec spec;
  spec.alpha_grid = {0.3, 0.1};
  EXPECT_THROW(spec.validate(), qae::Error);
  spec = SweepSpec{};
  spec.alpha_grid = {};
  EXPECT_THROW(spec.validate(), qae::Error);
  spec = SweepSpec{};
  spec.strategies = {Strategy::Vanilla};
  EXPECT_THROW(spec.validate(), qae::Error);
  spec = SweepSpec{};
  spec.beta_grid = {0.0, 1.0};
  EXPECT_THROW(spec.validate(), qae::Error);
}

TEST(SweepSpecTest, ParsesJson) {
  const auto spec = parse_sweep_spec(
      R"({"strategies": ["emb", "QAE_hyb"], "alpha_grid": [0.0, 0.5, 1.0], "beta_grid": [0.5],
          "objective": "mrr", "k": 5, "n": 8, "shuffle_seed": 3, "jobs": 2, "mode": "grid"})");
  EXPECT_EQ(spec.strategies, (std::vector<Strategy>{Strategy::Emb, Strategy::Hyb}));
  EXPECT_EQ(spec.alpha_grid.size(), 3u);
  EXPECT_EQ(spec.objective, Objective::MRR);
  EXPECT_EQ(spec.k, 5u);
  EXPECT_EQ(spec.n, 8);
  EXPECT_EQ(spec.shuffle_seed, 3u);
  EXPECT_EQ(spec.jobs, 2u);
  EXPECT_THROW(parse_sweep_spec(R"({"alpha": [0.1]})"), qae::Error);
  EXPECT_THROW(parse_sweep_spec("[1, 2]"), qae::Error);
  EXPECT_THROW(parse_sweep_spec(R"({"k": "ten"})"), qae::Error);
}

TEST(GridSearchTest, PointCounts) {
  EXPECT_EQ(grid_points(only(Strategy::Emb)).size(), 7u);
  EXPECT_EQ(grid_points(only(Strategy::Txt)).size(), 6u);
  EXPECT_EQ(grid_points(only(Strategy::Hyb)).size(), 42u);
  EXPECT_EQ(grid_points(SweepSpec{}).size(), 55u);
  std::atomic<int> calls{0};
  auto spec = only(Strategy::Hyb);
  spec.jobs = 4;
  const auto points = grid_search(spec, [&](const QaeConfig& c) {
    ++calls;
    return c.alpha * c.beta;
  });
  EXPECT_EQ(calls.load(), 42);
  EXPECT_EQ(points.size(), 42u);
}

TEST(GridSearchTest, ReturnsGlobalMaximumSortedDescending) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<std::pair<double, double>, double> table;
    const auto fn = [&](const QaeConfig& c) {
      auto [it, inserted] = table.emplace(std::pair{c.alpha, c.beta}, 0.0);
      if (inserted) it->second = u(gen);
      return it->second;
    };
    auto spec = only(Strategy::Hyb);
    const auto points = grid_search(spec, fn);
    double best = 0.0;
    for (const auto& [key, v] : table) best = std::max(best, v);
    EXPECT_EQ(points.front().score, best);
    EXPECT_EQ(fn(points.front().config), best);  // independent re-evaluation
    for (std::size_t i = 1; i < points.size(); ++i) EXPECT_GE(points[i - 1].score, points[i].score);
  }
}

TEST(GridSearchTest, TiesOrderByConfig) {
  const auto points = grid_search(only(Strategy::Emb), [](const QaeConfig&) { return 0.5; });
  for (std::size_t i = 0; i < points.size(); ++i) EXPECT_EQ(points[i].config.alpha, qae::strategies::kAlphaGrid[i]);
}

TEST(GridSearchTest, EmbSweepEmbedsOnce) {
  const auto data = qae::eval::make_geometric_dataset(20, 1);
  GeoStack stack(1, {});
  qae::eval::PreparedExperiment exp(data, {&stack.embedder, &stack.queries});
  QaeConfig warm;
  warm.strategy = Strategy::Emb;
  exp.run(warm);
  const std::size_t embed_calls = stack.stub->calls();
  const std::size_t gen_calls = stack.queries.generator_calls();
  int experiments = 0;
  grid_search(only(Strategy::Emb), [&](const QaeConfig& c) {
    ++experiments;
    return exp.run(c).metrics.ndcg;
  });
  EXPECT_EQ(experiments, 7);
  EXPECT_EQ(stack.stub->calls(), embed_calls);
  EXPECT_EQ(stack.queries.generator_calls(), gen_calls);
}

TEST(GridSearchTest, HighVarianceClustersFavorInteriorAlpha) {
  // Wide clusters make the 10-query mean noisy, while the document still sits
  // near its cluster; neither pure representation wins.
  const auto data = qae::eval::make_geometric_dataset(100, 5);
  GeoStack stack(4, {55.0, 40.0, 35.0});
  qae::eval::PreparedExperiment exp(data, {&stack.embedder, &stack.queries});
  auto spec = only(Strategy::Emb);
  spec.alpha_grid = {0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9, 1.0};
  const auto points = grid_search(spec, [&](const QaeConfig& c) { return exp.run(c).metrics.ndcg; });
  const double best_alpha = points.front().config.alpha;
  EXPECT_GT(best_alpha, 0.0);
  EXPECT_LT(best_alpha, 1.0);
  double at0 = 0.0, at1 = 0.0;
  for (const auto& p : points) {
    if (p.config.alpha == 0.0) at0 = p.score;
    if (p.config.alpha == 1.0) at1 = p.score;
  }
  EXPECT_GT(points.front().score, at0);
  EXPECT_GT(points.front().score, at1);
}

TEST(TernarySearchTest, FindsArgmaxOfUnimodalCurves) {
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 200; ++trial) {
    Curve curve{random_unimodal(gen)};
    const auto result = ternary_search_alpha(only(Strategy::Emb), curve.fn());
    const std::size_t argmax =
        static_cast<std::size_t>(std::max_element(curve.values.begin(), curve.values.end()) - curve.values.begin());
    EXPECT_EQ(alpha_index(result.best.config.alpha), argmax);
    EXPECT_LE(result.evaluations, 6u);
    EXPECT_EQ(static_cast<std::size_t>(curve.calls), result.evaluations);
    EXPECT_FALSE(result.fell_back_to_grid);
  }
}

TEST(TernarySearchTest, MonotoneCurvesReturnEndpoints) {
  Curve up{{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}};
  EXPECT_EQ(ternary_search_alpha(only(Strategy::Emb), up.fn()).best.config.alpha, 0.9);
  Curve down{{0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1}};
  EXPECT_EQ(ternary_search_alpha(only(Strategy::Emb), down.fn()).best.config.alpha, 0.0);
}

TEST(TernarySearchTest, TwoPeaksTriggerFallback) {
  Curve curve{{0.5, 0.9, 0.1, 0.1, 0.1, 0.95, 0.2}};
  const auto result = ternary_search_alpha(only(Strategy::Emb), curve.fn());
  EXPECT_TRUE(result.fell_back_to_grid);
  EXPECT_EQ(result.evaluations, 7u);
  EXPECT_EQ(result.best.config.alpha, 0.75);
  EXPECT_EQ(result.probed.size(), 7u);
}

TEST(TernarySearchTest, HybNeedsSingleBeta) {
  Curve curve{{1, 2, 3, 4, 3, 2, 1}};
  auto spec = only(Strategy::Hyb);
  EXPECT_THROW(ternary_search_alpha(spec, curve.fn()), qae::Error);
  spec.beta_grid = {0.75};
  const auto result = ternary_search_alpha(spec, curve.fn());
  EXPECT_EQ(result.best.config.alpha, 0.45);
  EXPECT_EQ(result.best.config.beta, 0.75);
  EXPECT_THROW(ternary_search_alpha(only(Strategy::Txt), curve.fn()), qae::Error);
}

TEST(LocalMaximaTest, Counts) {
  EXPECT_EQ(count_local_maxima({1, 2, 3, 2, 1}), 1u);
  EXPECT_EQ(count_local_maxima({1, 2, 2, 2, 1}), 1u);
  EXPECT_EQ(count_local_maxima({3, 1, 3}), 2u);
  EXPECT_EQ(count_local_maxima({1, 2, 3}), 1u);
  EXPECT_EQ(count_local_maxima({2, 2}), 1u);
}

TEST(MeanObjectiveTest, AveragesDatasets) {
  const auto fn = mean_objective({[](const QaeConfig& c) { return c.alpha; }, [](const QaeConfig&) { return 1.0; }});
  QaeConfig c;
  c.alpha = 0.5;
  EXPECT_DOUBLE_EQ(fn(c), 0.75);
}

TEST(SweepCsvTest, OneRowPerPoint) {
  const auto points = grid_search(only(Strategy::Emb), [](const QaeConfig& c) { return c.alpha; });
  std::ostringstream out;
  write_sweep_csv(out, points, Objective::NDCG);
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 8u);
  EXPECT_EQ(lines[0], "strategy,alpha,beta,ndcg");
  EXPECT_EQ(lines[1], "emb,0.9,,0.9000000000");
}
