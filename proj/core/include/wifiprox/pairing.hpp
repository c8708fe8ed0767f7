#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "wifiprox/types.hpp"

namespace wifiprox {

struct PairingConfig {
  double close_max_m = 2.25;
  double far_min_m = 3.25;
  double far_max_m = 20.0;
  bool exclude_same_burst = false;

  /// Throws config_error unless 0 < close_max < far_min <= far_max.
  void validate() const;
};

/// 2D Euclidean distance; throws validation_error for different floors.
double pair_distance(const Fingerprint& a, const Fingerprint& b);

/// Label for a distance, or nullopt when the pair falls in a dropped band.
std::optional<ProximityClass> classify_distance(double d, const PairingConfig& cfg) noexcept;

/// Every unordered pair within each floor subset that survives the distance
/// gates. Fingerprints with no APs are ignored. Pairs are canonically ordered
/// (fewer APs first, then id) and emitted in a deterministic order: floors
/// ascending, then by the ids of the two members.
///
/// The returned pairs point into `fps`, which must outlive them.
std::vector<FingerprintPair> enumerate_pairs(const std::vector<Fingerprint>& fps, const PairingConfig& cfg);

/// Puts (a, b) into canonical order and labels it.
FingerprintPair make_pair(const Fingerprint& a, const Fingerprint& b, const PairingConfig& cfg);

struct ClassCounts {
  std::size_t close = 0;
  std::size_t far = 0;
};
ClassCounts count_labels(const std::vector<FingerprintPair>& pairs) noexcept;

struct TrainingSplit {
  std::vector<FingerprintPair> train;
  std::vector<FingerprintPair> remainder;
};

/// Uniform sample without replacement of n_close Close and n_far Far pairs.
/// Both halves keep the input order. Throws config_error when a class has
/// too few pairs.
TrainingSplit sample_training_set(const std::vector<FingerprintPair>& pairs, std::size_t n_close,
                                  std::size_t n_far, std::uint64_t seed);

/// Index-level variant shared with feature-table sampling: returns, for each
/// input position, whether it was selected.
std::vector<bool> sample_by_class(const std::vector<ProximityClass>& labels, std::size_t n_close,
                                  std::size_t n_far, std::uint64_t seed);

// Pairs file: one JSON object per line
// {"a": id, "b": id, "distance_m": num, "label": "Close"|"Far"}.
void write_pairs(std::ostream& out, const std::vector<FingerprintPair>& pairs);
void write_pairs(const std::filesystem::path& path, const std::vector<FingerprintPair>& pairs);

/// Resolves pair records against `fps` by id; unknown ids throw
/// validation_error. Pairs are re-canonicalised on read.
std::vector<FingerprintPair> read_pairs(std::istream& in, const std::vector<Fingerprint>& fps,
                                        const std::string& source_name);
std::vector<FingerprintPair> read_pairs(const std::filesystem::path& path, const std::vector<Fingerprint>& fps);

}  // namespace wifiprox
