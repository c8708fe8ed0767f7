#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wifiprox/types.hpp"

namespace wifiprox {

/// How a phone model distorts the true signal: reported = scale * true +
/// offset, and readings well below `sensitivity_dbm` are rarely reported.
struct DeviceProfile {
  std::string model;
  double scale = 1.0;
  double offset_db = 0.0;
  double sensitivity_dbm = -90.0;
};

const std::vector<DeviceProfile>& default_device_profiles();

enum class Density { low, medium, high };

Density parse_density(std::string_view text);
std::string_view to_string(Density d) noexcept;

/// Single-site radio environment. Signal model per AP:
///   P0 - 10 n log10(max(d, d0) / d0) + shadowing(position) + fading
///     + burst offset + scan noise
/// Shadowing is a spatially correlated field per AP; fading is independent
/// per (position, AP); the burst offset models body and orientation effects
/// that persist across one burst. Recorded coordinates carry a survey error.
struct SynthConfig {
  std::string dataset_id = "synth";
  std::uint64_t seed = 0;
  double width_m = 40.0;
  double height_m = 30.0;
  double ap_margin_m = 10.0;  // APs may sit this far outside the surveyed area
  std::size_t floors = 1;
  std::size_t n_aps = 60;       // per floor
  std::size_t n_positions = 300;  // per floor
  std::size_t devices_per_position = 2;
  std::size_t scans_per_burst = 9;
  double p0_dbm = -38.0;
  double d0_m = 1.0;
  double path_loss_exponent = 3.0;
  double shadowing_sd_db = 5.0;
  double shadowing_length_m = 6.0;
  double fading_sd_db = 4.0;
  double burst_offset_sd_db = 3.0;
  double scan_noise_sd_db = 2.0;
  double position_error_sd_m = 0.75;
  double detection_softness_db = 2.0;
  std::vector<DeviceProfile> devices = default_device_profiles();

  void validate() const;
};

/// Presets whose median detected-AP count per scan lands near 10, 40 and 80.
SynthConfig density_preset(Density d);

/// Generates every scan of every burst. Positions are uniform over the
/// surveyed area; each position is surveyed by `devices_per_position`
/// distinct device models, each recording one burst. A scan that would
/// detect nothing keeps its strongest AP. Output depends only on the config.
std::vector<Fingerprint> generate_site(const SynthConfig& cfg);

}  // namespace wifiprox
