#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qae/strategies/strategies.hpp"

namespace {

std::vector<qae::Embedding> random_vectors(std::size_t count, std::size_t dim) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  std::vector<qae::Embedding> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = nd(gen);
    out.push_back(qae::normalize(qae::Embedding(std::move(v))));
  }
  return out;
}

void BM_QaeBase(benchmark::State& state) {
  const auto qs = random_vectors(static_cast<std::size_t>(state.range(0)), 768);
  const auto doc = random_vectors(1, 768).front();
  for (auto _ : state) benchmark::DoNotOptimize(qae::strategies::qae_base(doc, qs));
}
BENCHMARK(BM_QaeBase)->Arg(10)->Arg(80);

void BM_QaeEmb(benchmark::State& state) {
  const auto qs = random_vectors(10, 768);
  const auto doc = random_vectors(1, 768).front();
  for (auto _ : state) benchmark::DoNotOptimize(qae::strategies::qae_emb(doc, qs, 0.45));
}
BENCHMARK(BM_QaeEmb);

}  // namespace
