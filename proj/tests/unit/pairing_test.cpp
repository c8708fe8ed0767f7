#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "wifiprox/errors.hpp"
#include "wifiprox/pairing.hpp"
#include "wifiprox/random.hpp"

using namespace wifiprox;

namespace {

std::vector<Fingerprint> grid(std::size_t n, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  std::vector<Fingerprint> fps;
  for (std::size_t i = 0; i < n; ++i) {
    fixture::Spec s;
    s.id = "g" + std::to_string(i);
    s.x = uniform_real(rng, 0.0, 25.0);
    s.y = uniform_real(rng, 0.0, 10.0);
    s.floor = i % 3 == 0 ? "1" : "2";
    s.burst = "b" + std::to_string(i / 2);
    s.scan = static_cast<int>(i % 2);
    std::vector<std::pair<std::uint64_t, double>> r;
    for (std::uint64_t a = 1; a <= 1 + i % 4; ++a) r.emplace_back(a, -50.0 - static_cast<double>(a));
    fps.push_back(fixture::make(s, r));
  }
  return fps;
}

}  // namespace

TEST(Classify, BandEdgesAreInclusive) {
  const PairingConfig cfg;
  EXPECT_EQ(classify_distance(0.0, cfg), ProximityClass::Close);
  EXPECT_EQ(classify_distance(2.25, cfg), ProximityClass::Close);
  EXPECT_FALSE(classify_distance(2.26, cfg).has_value());
  EXPECT_FALSE(classify_distance(3.24, cfg).has_value());
  EXPECT_EQ(classify_distance(3.25, cfg), ProximityClass::Far);
  EXPECT_EQ(classify_distance(20.0, cfg), ProximityClass::Far);
  EXPECT_FALSE(classify_distance(20.01, cfg).has_value());
}

TEST(Config, RejectsInvertedBands) {
  PairingConfig cfg;
  cfg.close_max_m = 4.0;
  EXPECT_THROW(cfg.validate(), config_error);
  cfg = {};
  cfg.far_max_m = 3.0;
  EXPECT_THROW(cfg.validate(), config_error);
  cfg = {};
  cfg.close_max_m = 0.0;
  EXPECT_THROW(cfg.validate(), config_error);
}

TEST(Distance, DifferentFloorsAreRejected) {
  fixture::Spec s;
  s.id = "a";
  const auto a = fixture::make(s, {{1, -50}});
  s.id = "b";
  s.floor = "3";
  s.x = 3;
  const auto b = fixture::make(s, {{1, -50}});
  EXPECT_THROW(pair_distance(a, b), validation_error);
}

TEST(Enumerate, MatchesBruteForceCounts) {
  const auto fps = grid(60, 11);
  const PairingConfig cfg;
  std::size_t close = 0, far = 0;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (fps[i].floor_key() != fps[j].floor_key()) continue;
      const double d = std::hypot(fps[i].position().x_m - fps[j].position().x_m,
                                  fps[i].position().y_m - fps[j].position().y_m);
      if (d <= 2.25) ++close;
      else if (d >= 3.25 && d <= 20.0) ++far;
    }
  }
  const auto pairs = enumerate_pairs(fps, cfg);
  const auto counts = count_labels(pairs);
  EXPECT_EQ(counts.close, close);
  EXPECT_EQ(counts.far, far);

  std::set<std::string> seen;
  for (const auto& p : pairs) {
    EXPECT_FALSE(canonical_before(*p.b, *p.a));
    EXPECT_TRUE(seen.insert(p.pair_id()).second);
  }
}

TEST(Enumerate, SkipsEmptyFingerprintsAndSameBurst) {
  fixture::Spec s;
  s.burst = "b";
  s.id = "a";
  s.scan = 0;
  const auto a = fixture::make(s, {{1, -50}});
  s.id = "b";
  s.scan = 1;
  const auto b = fixture::make(s, {{1, -55}});
  s.id = "c";
  s.burst = "other";
  s.scan = 0;
  const auto c = fixture::make(s, {{1, -55}});
  const auto empty = fixture::make("e", {});
  const std::vector<Fingerprint> fps{a, b, c, empty};
  PairingConfig cfg;
  EXPECT_EQ(enumerate_pairs(fps, cfg).size(), 3u);
  cfg.exclude_same_burst = true;
  EXPECT_EQ(enumerate_pairs(fps, cfg).size(), 2u);
}

TEST(Enumerate, DuplicateIdsThrow) {
  const std::vector<Fingerprint> fps{fixture::make("a", {{1, -50}}), fixture::make("a", {{2, -50}})};
  EXPECT_THROW(enumerate_pairs(fps, {}), validation_error);
}

TEST(Sampling, ExactCountsDisjointAndSeeded) {
  const auto fps = grid(80, 3);
  const auto pairs = enumerate_pairs(fps, {});
  const auto counts = count_labels(pairs);
  ASSERT_GE(counts.close, 10u);
  const auto split = sample_training_set(pairs, 10, 20, 99);
  const auto tc = count_labels(split.train);
  EXPECT_EQ(tc.close, 10u);
  EXPECT_EQ(tc.far, 20u);
  EXPECT_EQ(split.train.size() + split.remainder.size(), pairs.size());
  std::set<std::string> ids;
  for (const auto& p : split.train) ids.insert(p.pair_id());
  for (const auto& p : split.remainder) EXPECT_EQ(ids.count(p.pair_id()), 0u);

  const auto again = sample_training_set(pairs, 10, 20, 99);
  ASSERT_EQ(again.train.size(), split.train.size());
  for (std::size_t i = 0; i < again.train.size(); ++i) {
    EXPECT_EQ(again.train[i].pair_id(), split.train[i].pair_id());
  }
  const auto other = sample_training_set(pairs, 10, 20, 100);
  bool differs = false;
  for (std::size_t i = 0; i < other.train.size(); ++i) {
    differs = differs || other.train[i].pair_id() != split.train[i].pair_id();
  }
  EXPECT_TRUE(differs);
  EXPECT_THROW(sample_training_set(pairs, counts.close + 1, 0, 1), config_error);
}

TEST(PairsFile, RoundTrip) {
  const auto fps = grid(20, 5);
  const auto pairs = enumerate_pairs(fps, {});
  std::stringstream buf;
  write_pairs(buf, pairs);
  const auto back = read_pairs(buf, fps, "mem");
  ASSERT_EQ(back.size(), pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(back[i].a, pairs[i].a);
    EXPECT_EQ(back[i].b, pairs[i].b);
    EXPECT_EQ(back[i].distance_m, pairs[i].distance_m);
    EXPECT_EQ(back[i].label, pairs[i].label);
  }
  std::stringstream bad(R"({"a":"g0","b":"nope","distance_m":1,"label":"Close"})");
  EXPECT_THROW(read_pairs(bad, fps, "mem"), validation_error);
}
