#include <benchmark/benchmark.h>

#include "wifiprox/random.hpp"
#include "wifiprox/stats.hpp"

using namespace wifiprox;

namespace {

void BM_Kendall(benchmark::State& state) {
  Rng rng = make_stream(4, 0);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = -30.0 - static_cast<double>(uniform_index(rng, 60));
    y[i] = -30.0 - static_cast<double>(uniform_index(rng, 60));
  }
  for (auto _ : state) benchmark::DoNotOptimize(stats::kendall_tau_b(x, y));
}

void BM_RankCorrelations(benchmark::State& state) {
  Rng rng = make_stream(5, 0);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = normal(rng, -60, 10);
    y[i] = normal(rng, -60, 10);
  }
  for (auto _ : state) benchmark::DoNotOptimize(stats::rank_correlations(x, y));
}

}  // namespace

BENCHMARK(BM_Kendall)->Arg(10)->Arg(40)->Arg(80)->Arg(3240);
BENCHMARK(BM_RankCorrelations)->Arg(10)->Arg(80);
BENCHMARK_MAIN();
