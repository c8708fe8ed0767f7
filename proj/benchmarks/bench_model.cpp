#include <benchmark/benchmark.h>

#include <numeric>

#include "wifiprox/model.hpp"
#include "wifiprox/random.hpp"

using namespace wifiprox;

namespace {

FeatureTable noisy_table(std::size_t rows, std::size_t cols) {
  Rng rng = make_stream(3, 0);
  FeatureTable t;
  for (std::size_t j = 0; j < cols; ++j) t.names.push_back("f" + std::to_string(j));
  for (std::size_t i = 0; i < rows; ++i) {
    FeatureRow r;
    const bool close = i % 2 == 0;
    r.pair_id = std::to_string(i);
    r.label = close ? ProximityClass::Close : ProximityClass::Far;
    for (std::size_t j = 0; j < cols; ++j) r.values.push_back(normal(rng, close && j < 3 ? 1.0 : 0.0, 1.0));
    t.rows.push_back(std::move(r));
  }
  return t;
}

void BM_TrainTree(benchmark::State& state) {
  const auto table = noisy_table(static_cast<std::size_t>(state.range(0)), 7);
  const auto data = Dataset::from_table(table);
  std::vector<std::size_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), 0);
  const std::vector<std::size_t> feats{0, 3, 5};
  for (auto _ : state) benchmark::DoNotOptimize(train_tree(data, rows, feats));
}

void BM_TrainEnsemble(benchmark::State& state) {
  const auto table = noisy_table(2000, 7);
  EnsembleConfig cfg;
  cfg.n_estimators = 50;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_ensemble(table, cfg));
}

}  // namespace

BENCHMARK(BM_TrainTree)->Arg(1000)->Arg(6000);
BENCHMARK(BM_TrainEnsemble)->Unit(benchmark::kMillisecond);
