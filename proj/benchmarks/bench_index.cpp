#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "qae/index/flat_index.hpp"

namespace {

qae::Embedding random_unit(std::size_t dim, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  std::vector<double> v(dim);
  for (double& x : v) x = nd(gen);
  return qae::normalize(qae::Embedding(std::move(v)));
}

qae::index::FlatIndex make_index(std::size_t docs, std::size_t per_doc, std::size_t dim) {
  std::mt19937_64 gen(1);
  std::vector<qae::strategies::DocRepresentation> reps;
  for (std::size_t d = 0; d < docs; ++d) {
    qae::strategies::DocRepresentation rep{"doc" + std::to_string(d), {}};
    for (std::size_t e = 0; e < per_doc; ++e) rep.vectors.push_back(random_unit(dim, gen));
    reps.push_back(std::move(rep));
  }
  return qae::index::FlatIndex::build(
      reps, per_doc > 1 ? qae::index::EntryKind::NaiveQuery : qae::index::EntryKind::Single);
}

void BM_Search(benchmark::State& state) {
  const auto docs = static_cast<std::size_t>(state.range(0));
  const auto per_doc = static_cast<std::size_t>(state.range(1));
  const auto index = make_index(docs, per_doc, 384);
  std::mt19937_64 gen(2);
  const auto query = random_unit(384, gen);
  for (auto _ : state) benchmark::DoNotOptimize(index.search(query, 10));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * docs * per_doc));
}
BENCHMARK(BM_Search)->Args({1000, 1})->Args({10000, 1})->Args({1000, 10});

void BM_Build(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(make_index(static_cast<std::size_t>(state.range(0)), 1, 384));
}
BENCHMARK(BM_Build)->Arg(1000);

}  // namespace
