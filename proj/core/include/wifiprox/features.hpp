#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wifiprox/types.hpp"

namespace wifiprox {

/// RSSI adjustments applied before every RSSI-dependent feature family.
enum class TransformVariant { none, single_ls, single_half_ls, double_ls };

inline constexpr std::array<TransformVariant, 4> kTransformVariants = {
    TransformVariant::none, TransformVariant::single_ls, TransformVariant::single_half_ls,
    TransformVariant::double_ls};

std::string_view to_string(TransformVariant v) noexcept;

enum class DistanceMode {
  shared,       // L1/L2 over shared APs only
  union_floor,  // over the AP union, undetected APs filled with union_floor_dbm
};

struct FeatureConfig {
  // Redpin: per-AP contribution, then divided by |P|.
  double redpin_match = 1.0;
  double redpin_loose_match = 0.5;
  double redpin_miss = -0.4;
  double redpin_tolerance_db = 10.0;

  // RE3: weight of an AP pair tied in exactly one fingerprint.
  double re3_half_weight = 0.5;

  // Denominator used in pair ratios when an RSSI is exactly 0 dBm.
  double ratio_zero_clamp_dbm = -0.5;

  DistanceMode distance_mode = DistanceMode::shared;
  double union_floor_dbm = -100.0;
};

inline constexpr std::size_t kApDetectionFeatureCount = 5;
inline constexpr std::size_t kThresholdZCount = 15;
inline constexpr std::size_t kTopKCount = 8;
inline constexpr std::size_t kRssiFeatureCount = 2 + kThresholdZCount + kThresholdZCount + kTopKCount + 2 + 16 + 21;
inline constexpr std::size_t kFeatureCount = kApDetectionFeatureCount + kRssiFeatureCount * kTransformVariants.size() + 2;
static_assert(kRssiFeatureCount == 79);
static_assert(kFeatureCount == 323);

/// Feature names in registry order, `<family>.<parameter>.<transform>`.
/// Transform-independent features use the transform token "indep".
const std::vector<std::string>& feature_names();

/// Position of a name in the registry, or nullopt.
std::optional<std::size_t> feature_index(std::string_view name);

/// The RSSI-dependent base names (without the transform suffix), in order.
const std::vector<std::string>& rssi_feature_base_names();

struct FeatureVector {
  std::vector<double> values;  // aligned with feature_names()
  std::optional<ProximityClass> label;

  const std::vector<std::string>& names() const { return feature_names(); }
  double operator[](std::string_view name) const;
};

// ---------------------------------------------------------------------------
// Individual families on raw RSSI values. All shared-AP vectors are built in
// ascending ApId order.

/// shared count, union count, non-shared count, |count(a) - count(b)|, Jaccard.
std::array<double, 5> ap_detection_features(const Fingerprint& a, const Fingerprint& b);

/// L1 and L2 distance between shared-AP RSSI vectors (both 0 without shared APs).
std::array<double, 2> manhattan_euclidean(const Fingerprint& a, const Fingerprint& b,
                                          const FeatureConfig& cfg = {});

/// Element z-1: 1 iff some shared AP is within z dB of the strongest AP in
/// both fingerprints, for z = 1..15.
std::array<double, kThresholdZCount> shared_top_ap_within_z(const Fingerprint& a, const Fingerprint& b);

/// Element z-1: fraction of shared APs with |RSSI_a - RSSI_b| <= z.
std::array<double, kThresholdZCount> rssi_within_z_pct(const Fingerprint& a, const Fingerprint& b);

/// Element k-1: 1 iff the k strongest APs of a and b form the same set.
/// RSSI ties are broken by ApId ascending; fewer than k APs gives 0.
std::array<double, kTopKCount> has_shared_top_k(const Fingerprint& a, const Fingerprint& b);

/// {score(max, min), score(min, max)}, min/max by AP count (canonical order).
std::array<double, 2> redpin_scores(const Fingerprint& a, const Fingerprint& b, const FeatureConfig& cfg = {});
double redpin_score(const Fingerprint& p, const Fingerprint& q, const FeatureConfig& cfg = {});

/// Cosine, Pearson, Spearman, Kendall tau-b for the RSSI value, pair
/// difference, pair ratio and normalised rank vector pairs (16 values).
std::array<double, 16> correlation_features(const Fingerprint& a, const Fingerprint& b,
                                            const FeatureConfig& cfg = {});

/// min, max, mean, median, harmonic mean, sample sd, population sd for the
/// RSSI difference, pair-difference comparison and pair-ratio comparison
/// vectors (21 values).
std::array<double, 21> difference_features(const Fingerprint& a, const Fingerprint& b,
                                           const FeatureConfig& cfg = {});

/// 1 iff the device model strings match after trimming and ASCII case folding.
double identical_devices(const Fingerprint& a, const Fingerprint& b);

/// Fraction of shared-AP pairs whose relative order agrees in both
/// fingerprints (ties in both count 1, a tie in one counts half_weight).
double re3(const Fingerprint& a, const Fingerprint& b, const FeatureConfig& cfg = {});

struct LinearFit {
  double slope = 1.0;
  double intercept = 0.0;

  double operator()(double r) const noexcept { return slope * r + intercept; }
};

/// Ordinary least squares of target on source. No points: (1, 0). Constant
/// source (including a single point): (1, mean(target) - mean(source)).
LinearFit fit_least_squares(std::span<const double> source, std::span<const double> target);

struct DeviceFits {
  LinearFit forward;   // (A, B): first fingerprint fitted onto the second
  LinearFit backward;  // (C, D): second fitted onto the first
};

/// Fits over shared-AP RSSIs of `first` and `second` in the given order.
DeviceFits fit_least_squares(const Fingerprint& first, const Fingerprint& second);

/// Full registry for a pair, computed in canonical order (fewer APs first),
/// so extract(a, b) and extract(b, a) are identical. Non-finite values are
/// replaced with 0.
FeatureVector extract(const Fingerprint& a, const Fingerprint& b, const FeatureConfig& cfg = {});
FeatureVector extract(const FingerprintPair& pair, const FeatureConfig& cfg = {});

}  // namespace wifiprox
