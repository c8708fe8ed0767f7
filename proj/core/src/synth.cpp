#include "wifiprox/synth.hpp"

#include <cmath>
#include <numbers>

#include "wifiprox/errors.hpp"
#include "wifiprox/random.hpp"

namespace wifiprox {

const std::vector<DeviceProfile>& default_device_profiles() {
  static const std::vector<DeviceProfile> profiles{
      {"Pixel 3", 1.00, 0.0, -92.0},
      {"Nokia 2.2", 0.85, -8.0, -87.0},
      {"Pixel XL", 1.10, 3.0, -94.0},
      {"Oppo RX17 Pro", 0.92, -4.0, -90.0},
  };
  return profiles;
}

Density parse_density(std::string_view text) {
  if (text == "low") return Density::low;
  if (text == "medium") return Density::medium;
  if (text == "high") return Density::high;
  throw config_error("unknown density '" + std::string(text) + "' (expected low, medium or high)");
}

std::string_view to_string(Density d) noexcept {
  switch (d) {
    case Density::low: return "low";
    case Density::medium: return "medium";
    case Density::high: return "high";
  }
  return "?";
}

void SynthConfig::validate() const {
  if (dataset_id.empty()) throw config_error("synthetic dataset id is empty");
  if (!(width_m > 0.0) || !(height_m > 0.0)) throw config_error("site dimensions must be positive");
  if (!(ap_margin_m >= 0.0)) throw config_error("AP margin must be non-negative");
  if (floors == 0 || n_aps == 0 || n_positions == 0 || scans_per_burst == 0) {
    throw config_error("floors, APs, positions and scans per burst must be at least 1");
  }
  if (devices.empty()) throw config_error("at least one device profile is required");
  if (devices_per_position == 0 || devices_per_position > devices.size()) {
    throw config_error("devices per position must be between 1 and the number of device profiles");
  }
  if (!(d0_m > 0.0) || !(path_loss_exponent > 0.0)) throw config_error("path-loss parameters must be positive");
  if (!(shadowing_sd_db >= 0.0) || !(fading_sd_db >= 0.0) || !(burst_offset_sd_db >= 0.0) ||
      !(scan_noise_sd_db >= 0.0) || !(position_error_sd_m >= 0.0) || !(shadowing_length_m > 0.0) ||
      !(detection_softness_db > 0.0)) {
    throw config_error("noise parameters must be non-negative and length scales positive");
  }
}

SynthConfig density_preset(Density d) {
  SynthConfig cfg;
  switch (d) {
    case Density::low:
      // Small residential floor plan: few APs, walls attenuate quickly, few
      // people moving around so readings are stable.
      cfg.dataset_id = "synth-low";
      cfg.width_m = 24.0;
      cfg.height_m = 16.0;
      cfg.ap_margin_m = 25.0;
      cfg.n_aps = 19;
      cfg.path_loss_exponent = 3.8;
      cfg.shadowing_sd_db = 7.0;
      cfg.shadowing_length_m = 3.0;
      cfg.fading_sd_db = 2.0;
      cfg.burst_offset_sd_db = 1.5;
      cfg.scan_noise_sd_db = 1.5;
      cfg.devices = {default_device_profiles()[0], default_device_profiles()[1]};
      break;
    case Density::medium:
      cfg.dataset_id = "synth-medium";
      cfg.width_m = 40.0;
      cfg.height_m = 30.0;
      cfg.ap_margin_m = 15.0;
      cfg.n_aps = 45;
      cfg.path_loss_exponent = 3.0;
      cfg.shadowing_sd_db = 5.0;
      cfg.shadowing_length_m = 6.0;
      cfg.devices = {default_device_profiles()[0], default_device_profiles()[2], default_device_profiles()[3]};
      break;
    case Density::high:
      // Open office or campus floor with many overlapping networks and busy
      // corridors: slow path loss, strong temporal fluctuation.
      cfg.dataset_id = "synth-high";
      cfg.width_m = 60.0;
      cfg.height_m = 40.0;
      cfg.ap_margin_m = 10.0;
      cfg.n_aps = 85;
      cfg.path_loss_exponent = 2.3;
      cfg.shadowing_sd_db = 4.0;
      cfg.shadowing_length_m = 10.0;
      cfg.fading_sd_db = 6.0;
      cfg.burst_offset_sd_db = 4.0;
      cfg.scan_noise_sd_db = 3.0;
      cfg.devices = {default_device_profiles()[2], default_device_profiles()[3]};
      break;
  }
  return cfg;
}

namespace {

// Random Fourier approximation of a stationary Gaussian field with a
// squared-exponential covariance of the given length scale.
class ShadowingField {
 public:
  static constexpr std::size_t kComponents = 48;

  ShadowingField(Rng& rng, double sd, double length) : amplitude_(sd * std::sqrt(2.0 / kComponents)) {
    for (std::size_t k = 0; k < kComponents; ++k) {
      wx_[k] = normal(rng, 0.0, 1.0 / length);
      wy_[k] = normal(rng, 0.0, 1.0 / length);
      phase_[k] = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
    }
  }

  double operator()(const Position& p) const {
    double s = 0.0;
    for (std::size_t k = 0; k < kComponents; ++k) s += std::cos(wx_[k] * p.x_m + wy_[k] * p.y_m + phase_[k]);
    return amplitude_ * s;
  }

 private:
  double amplitude_;
  double wx_[kComponents];
  double wy_[kComponents];
  double phase_[kComponents];
};

struct AccessPoint {
  ApId id;
  Position position;
  double tx_offset_db;
  ShadowingField shadowing;
};

}  // namespace

std::vector<Fingerprint> generate_site(const SynthConfig& cfg) {
  cfg.validate();
  std::vector<Fingerprint> out;

  for (std::size_t floor = 0; floor < cfg.floors; ++floor) {
    // Separate streams for layout and for measurements so that changing the
    // burst length does not move the APs.
    Rng layout = make_stream(cfg.seed, 2 * floor);
    Rng measure = make_stream(cfg.seed, 2 * floor + 1);
    const FloorKey key{cfg.dataset_id, "0", std::to_string(floor)};

    std::vector<AccessPoint> aps;
    aps.reserve(cfg.n_aps);
    for (std::size_t a = 0; a < cfg.n_aps; ++a) {
      const Position p{uniform_real(layout, -cfg.ap_margin_m, cfg.width_m + cfg.ap_margin_m),
                       uniform_real(layout, -cfg.ap_margin_m, cfg.height_m + cfg.ap_margin_m)};
      const double tx = normal(layout, 0.0, 3.0);
      aps.push_back({ApId::from_index(floor * 100000 + a + 1), p, tx,
                     ShadowingField(layout, cfg.shadowing_sd_db, cfg.shadowing_length_m)});
    }

    for (std::size_t pos = 0; pos < cfg.n_positions; ++pos) {
      const Position where{uniform_real(layout, 0.0, cfg.width_m), uniform_real(layout, 0.0, cfg.height_m)};
      std::vector<double> mean_rssi(aps.size());
      for (std::size_t a = 0; a < aps.size(); ++a) {
        const double dx = where.x_m - aps[a].position.x_m;
        const double dy = where.y_m - aps[a].position.y_m;
        const double d = std::max(std::sqrt(dx * dx + dy * dy), cfg.d0_m);
        mean_rssi[a] = cfg.p0_dbm + aps[a].tx_offset_db - 10.0 * cfg.path_loss_exponent * std::log10(d / cfg.d0_m) +
                       aps[a].shadowing(where) + normal(measure, 0.0, cfg.fading_sd_db);
      }
      const Position recorded{where.x_m + normal(measure, 0.0, cfg.position_error_sd_m),
                              where.y_m + normal(measure, 0.0, cfg.position_error_sd_m)};

      const auto device_picks = sample_without_replacement(layout, cfg.devices.size(), cfg.devices_per_position);
      for (std::size_t dev : device_picks) {
        const DeviceProfile& device = cfg.devices[dev];
        const std::string burst = "p" + std::to_string(pos) + "d" + std::to_string(dev);
        std::vector<double> burst_offset(aps.size());
        for (auto& o : burst_offset) o = normal(measure, 0.0, cfg.burst_offset_sd_db);
        for (std::size_t scan = 0; scan < cfg.scans_per_burst; ++scan) {
          std::vector<Reading> readings;
          std::size_t strongest = 0;
          double strongest_dbm = -1e300;
          for (std::size_t a = 0; a < aps.size(); ++a) {
            const double heard = mean_rssi[a] + burst_offset[a] + normal(measure, 0.0, cfg.scan_noise_sd_db);
            const double reported = std::min(std::round(device.scale * heard + device.offset_db), -10.0);
            const double p_detect =
                1.0 / (1.0 + std::exp(-(reported - device.sensitivity_dbm) / cfg.detection_softness_db));
            if (reported > strongest_dbm) {
              strongest = a;
              strongest_dbm = reported;
            }
            if (uniform_real(measure, 0.0, 1.0) >= p_detect) continue;
            readings.push_back({aps[a].id, reported});
          }
          // Keep bursts contiguous: a scan always hears at least its strongest AP.
          if (readings.empty()) readings.push_back({aps[strongest].id, strongest_dbm});
          FingerprintInfo info;
          info.id = cfg.dataset_id + ":f" + std::to_string(floor) + ":" + burst + ":s" + std::to_string(scan);
          info.floor_key = key;
          info.position = recorded;
          info.device_model = device.model;
          info.burst_id = burst;
          info.scan_index = static_cast<int>(scan);
          out.emplace_back(std::move(info), std::move(readings));
        }
      }
    }
  }
  return out;
}

}  // namespace wifiprox
