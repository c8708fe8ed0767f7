#include <benchmark/benchmark.h>

#include "wifiprox/features.hpp"
#include "wifiprox/pairing.hpp"
#include "wifiprox/synth.hpp"

using namespace wifiprox;

namespace {

std::vector<FingerprintPair> site_pairs(Density d, std::vector<Fingerprint>& storage) {
  auto cfg = density_preset(d);
  cfg.seed = 1;
  cfg.n_positions = 80;
  cfg.scans_per_burst = 1;
  storage = generate_site(cfg);
  return enumerate_pairs(storage, {});
}

void extract_density(benchmark::State& state, Density d) {
  std::vector<Fingerprint> fps;
  const auto pairs = site_pairs(d, fps);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract(pairs[i % pairs.size()]));
    ++i;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void BM_ExtractLow(benchmark::State& state) { extract_density(state, Density::low); }
void BM_ExtractMedium(benchmark::State& state) { extract_density(state, Density::medium); }
void BM_ExtractHigh(benchmark::State& state) { extract_density(state, Density::high); }

}  // namespace

BENCHMARK(BM_ExtractLow);
BENCHMARK(BM_ExtractMedium);
BENCHMARK(BM_ExtractHigh);
