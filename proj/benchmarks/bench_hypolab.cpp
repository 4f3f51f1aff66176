#include <benchmark/benchmark.h>

#include <vector>

#include "qae/hypolab/gaussian.hpp"
#include "qae/hypolab/mahalanobis.hpp"
#include "qae/hypolab/normality.hpp"

namespace {

using namespace qae::hypolab;

void BM_Mahalanobis(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto pts = sample_gaussian(qae::Embedding(std::vector<double>(dim, 0.0)), Covariance::isotropic(1.0), count, 4);
  for (auto _ : state) benchmark::DoNotOptimize(mahalanobis_sq(pts, default_regularization(pts)));
}
BENCHMARK(BM_Mahalanobis)->Args({10000, 5})->Args({80, 384});

void BM_AndersonDarling(benchmark::State& state) {
  const auto pts = sample_gaussian(qae::Embedding(std::vector<double>(1, 0.0)), Covariance::isotropic(1.0),
                                   static_cast<std::size_t>(state.range(0)), 5);
  std::vector<double> values;
  for (const auto& p : pts) values.push_back(p[0]);
  for (auto _ : state) benchmark::DoNotOptimize(anderson_darling(values));
}
BENCHMARK(BM_AndersonDarling)->Arg(10000);

}  // namespace
