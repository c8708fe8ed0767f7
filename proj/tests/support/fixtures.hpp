#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wifiprox/random.hpp"
#include "wifiprox/types.hpp"

namespace fixture {

using wifiprox::ApId;
using wifiprox::Fingerprint;
using wifiprox::FingerprintInfo;
using wifiprox::Reading;

inline ApId ap(std::uint64_t i) { return ApId::from_index(i); }

struct Spec {
  std::string id = "fp";
  double x = 0.0;
  double y = 0.0;
  std::string device = "phone";
  std::string floor = "0";
  std::optional<std::string> burst;
  std::optional<int> scan;
};

/// Readings given as (AP index, RSSI).
inline Fingerprint make(const Spec& s, const std::vector<std::pair<std::uint64_t, double>>& readings) {
  FingerprintInfo info;
  info.id = s.id;
  info.floor_key = {"test", "0", s.floor};
  info.position = {s.x, s.y};
  info.device_model = s.device;
  info.burst_id = s.burst;
  info.scan_index = s.scan;
  std::vector<Reading> r;
  for (const auto& [i, v] : readings) r.push_back({ap(i), v});
  return Fingerprint(std::move(info), std::move(r));
}

inline Fingerprint make(std::string id, const std::vector<std::pair<std::uint64_t, double>>& readings) {
  Spec s;
  s.id = std::move(id);
  return make(s, readings);
}

/// Random fingerprint over AP indices [1, universe] with integer dBm values.
inline Fingerprint random_fingerprint(wifiprox::Rng& rng, const std::string& id, std::size_t universe,
                                      std::size_t max_aps, const std::string& device = "phone") {
  const std::size_t n = wifiprox::uniform_index(rng, max_aps) + 1;
  const auto picks = wifiprox::sample_without_replacement(rng, universe, std::min(n, universe));
  std::vector<std::pair<std::uint64_t, double>> r;
  for (std::size_t p : picks) {
    r.emplace_back(p + 1, -30.0 - static_cast<double>(wifiprox::uniform_index(rng, 66)));
  }
  Spec s;
  s.id = id;
  s.device = device;
  return make(s, r);
}

}  // namespace fixture
