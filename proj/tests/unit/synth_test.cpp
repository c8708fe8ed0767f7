#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wifiprox/errors.hpp"
#include "wifiprox/ingest.hpp"
#include "wifiprox/synth.hpp"

using namespace wifiprox;

namespace {

double median_ap_count(const std::vector<Fingerprint>& fps) {
  std::vector<double> counts;
  for (const auto& fp : fps) counts.push_back(static_cast<double>(fp.ap_count()));
  std::sort(counts.begin(), counts.end());
  const std::size_t n = counts.size();
  return n % 2 ? counts[n / 2] : (counts[n / 2 - 1] + counts[n / 2]) / 2.0;
}

SynthConfig small(Density d) {
  auto cfg = density_preset(d);
  cfg.n_positions = 60;
  cfg.scans_per_burst = 2;
  return cfg;
}

}  // namespace

TEST(Synth, SameConfigSameBytes) {
  auto cfg = small(Density::medium);
  cfg.seed = 42;
  std::ostringstream a, b;
  write_canonical(a, generate_site(cfg));
  write_canonical(b, generate_site(cfg));
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 43;
  std::ostringstream c;
  write_canonical(c, generate_site(cfg));
  EXPECT_NE(a.str(), c.str());
}

TEST(Synth, ShapeOfTheSurvey) {
  auto cfg = small(Density::low);
  cfg.floors = 2;
  const auto fps = generate_site(cfg);
  EXPECT_EQ(fps.size(), 2u * 60u * cfg.devices_per_position * 2u);
  for (const auto& fp : fps) {
    EXPECT_GE(fp.ap_count(), 1u);
    EXPECT_TRUE(fp.burst_id().has_value());
    for (const auto& r : fp.readings()) {
      EXPECT_LE(r.rssi_dbm, -10.0);
      EXPECT_EQ(r.rssi_dbm, std::round(r.rssi_dbm));
    }
  }
  const auto bursts = group_bursts(fps);
  EXPECT_EQ(bursts.size(), 2u * 60u * cfg.devices_per_position);
  for (const auto& b : bursts) EXPECT_EQ(b.scans.size(), 2u);
}

TEST(Synth, BurstLengthDoesNotMoveTheLayout) {
  auto cfg = small(Density::low);
  const auto short_site = generate_site(cfg);
  cfg.scans_per_burst = 9;
  const auto long_site = generate_site(cfg);
  EXPECT_EQ(short_site.front().position(), long_site.front().position());
}

TEST(Synth, DensityPresetsHitTargetMedians) {
  const double low = median_ap_count(generate_site(small(Density::low)));
  const double medium = median_ap_count(generate_site(small(Density::medium)));
  const double high = median_ap_count(generate_site(small(Density::high)));
  EXPECT_GE(low, 7);
  EXPECT_LE(low, 14);
  EXPECT_GE(medium, 32);
  EXPECT_LE(medium, 48);
  EXPECT_GE(high, 70);
  EXPECT_LE(high, 90);
}

TEST(Synth, ConfigErrors) {
  EXPECT_EQ(parse_density("high"), Density::high);
  EXPECT_EQ(to_string(Density::medium), "medium");
  EXPECT_THROW(parse_density("dense"), config_error);
  auto cfg = density_preset(Density::low);
  cfg.devices_per_position = 3;
  EXPECT_THROW(generate_site(cfg), config_error);
  cfg = density_preset(Density::low);
  cfg.n_aps = 0;
  EXPECT_THROW(generate_site(cfg), config_error);
}
