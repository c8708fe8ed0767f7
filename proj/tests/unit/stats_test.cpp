#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "wifiprox/random.hpp"
#include "wifiprox/stats.hpp"

using namespace wifiprox;

namespace {

// Integer-valued draws from a small range so ties are common.
std::vector<double> tied_vector(Rng& rng, std::size_t n, std::size_t levels) {
  std::vector<double> v(n);
  for (auto& e : v) e = -40.0 - static_cast<double>(uniform_index(rng, levels));
  return v;
}

}  // namespace

TEST(Correlation, MatchesOraclesWithTies) {
  Rng rng = make_stream(2024, 0);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 49);
    const std::size_t levels = trial % 2 == 0 ? 4 : 60;
    const auto x = tied_vector(rng, n, levels);
    const auto y = tied_vector(rng, n, levels);
    EXPECT_NEAR(stats::cosine_similarity(x, y), oracle::cosine(x, y), 1e-9);
    EXPECT_NEAR(stats::pearson(x, y), oracle::pearson(x, y), 1e-9);
    EXPECT_NEAR(stats::spearman(x, y), oracle::spearman(x, y), 1e-9);
    EXPECT_NEAR(stats::kendall_tau_b(x, y), oracle::kendall_tau_b(x, y), 1e-9);
    const auto both = stats::rank_correlations(x, y);
    EXPECT_EQ(both.spearman, stats::spearman(x, y));
    EXPECT_EQ(both.kendall, stats::kendall_tau_b(x, y));
  }
}

TEST(Correlation, DegenerateInputsGiveZero) {
  const std::vector<double> one{3.0};
  const std::vector<double> flat{-50, -50, -50};
  const std::vector<double> ramp{-40, -50, -60};
  EXPECT_EQ(stats::pearson(one, one), 0.0);
  EXPECT_EQ(stats::spearman(one, one), 0.0);
  EXPECT_EQ(stats::kendall_tau_b(one, one), 0.0);
  EXPECT_EQ(stats::pearson(flat, ramp), 0.0);
  EXPECT_EQ(stats::spearman(flat, ramp), 0.0);
  EXPECT_EQ(stats::kendall_tau_b(flat, ramp), 0.0);
  const std::vector<double> zeros{0, 0, 0};
  EXPECT_EQ(stats::cosine_similarity(zeros, ramp), 0.0);
}

TEST(Correlation, PerfectAgreementIsOne) {
  const std::vector<double> x{-40, -55, -70, -62};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 7);
  EXPECT_NEAR(stats::pearson(x, y), 1.0, 1e-12);
  EXPECT_EQ(stats::spearman(x, y), 1.0);
  EXPECT_EQ(stats::kendall_tau_b(x, y), 1.0);
  std::vector<double> rev;
  for (double v : x) rev.push_back(-v);
  EXPECT_EQ(stats::kendall_tau_b(x, rev), -1.0);
}

TEST(Ranks, AverageRanksMatchOracle) {
  const std::vector<double> x{5, 1, 5, 3, 5, 1};
  EXPECT_EQ(stats::average_ranks(x), oracle::fractional_ranks(x));
  EXPECT_EQ(stats::average_ranks(x), (std::vector<double>{5, 1.5, 5, 3, 5, 1.5}));
}

TEST(Summary, HandComputedValues) {
  const std::vector<double> x{2, 4, 4, 10};
  const auto s = stats::summarize(x);
  EXPECT_EQ(s.min, 2);
  EXPECT_EQ(s.max, 10);
  EXPECT_EQ(s.mean, 5);
  EXPECT_EQ(s.median, 4);
  EXPECT_NEAR(s.harmonic_mean, 4.0 / (0.5 + 0.25 + 0.25 + 0.1), 1e-12);
  // squared deviations 9 1 1 25 = 36
  EXPECT_NEAR(s.sample_sd, std::sqrt(12.0), 1e-12);
  EXPECT_NEAR(s.population_sd, 3.0, 1e-12);

  const std::vector<double> with_zero{0, 1, 2};
  EXPECT_EQ(stats::summarize(with_zero).harmonic_mean, 0.0);
  const std::vector<double> single{7};
  EXPECT_EQ(stats::summarize(single).sample_sd, 0.0);
  const auto empty = stats::summarize({});
  EXPECT_EQ(empty.mean, 0.0);
  EXPECT_EQ(empty.max, 0.0);
}

TEST(Summary, OddMedian) {
  const std::vector<double> x{9, -1, 3};
  EXPECT_EQ(stats::median(x), 3);
}
