#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wifiprox {

/// Access point identity: a 48-bit BSSID.
///
/// Stored as its integer value so that the numeric order coincides with the
/// lexicographic order of the canonical "aa:bb:cc:dd:ee:ff" spelling.
class ApId {
 public:
  constexpr ApId() = default;

  /// Accepts any colon- or dash-separated 6-octet hex string (octets may be
  /// one or two digits, any case). Throws validation_error otherwise.
  static ApId parse(std::string_view text);

  /// Maps an integer AP index (as used by anonymised public datasets) into
  /// the canonical space, e.g. 7 -> "00:00:00:00:00:07".
  static ApId from_index(std::uint64_t index);

  constexpr std::uint64_t value() const noexcept { return value_; }
  std::string to_string() const;

  friend constexpr auto operator<=>(const ApId&, const ApId&) = default;

 private:
  constexpr explicit ApId(std::uint64_t v) : value_(v) {}
  std::uint64_t value_ = 0;
};

struct Position {
  double x_m = 0.0;
  double y_m = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

struct FloorKey {
  std::string dataset;
  std::string building;
  std::string floor;

  friend auto operator<=>(const FloorKey&, const FloorKey&) = default;
  std::string to_string() const;
};

struct Reading {
  ApId ap;
  double rssi_dbm = 0.0;

  friend bool operator==(const Reading&, const Reading&) = default;
};

struct FingerprintInfo {
  std::string id;
  FloorKey floor_key;
  Position position;
  std::string device_model;
  std::optional<std::string> burst_id;
  std::optional<int> scan_index;
};

/// One Wi-Fi scan. Immutable once constructed; readings are kept sorted by
/// ApId so that set operations between fingerprints are linear merges.
class Fingerprint {
 public:
  /// Validates: non-empty id, no duplicate AP, finite RSSI values,
  /// non-negative scan index. Empty readings are allowed here; pairing
  /// callers filter them out.
  Fingerprint(FingerprintInfo info, std::vector<Reading> readings);

  const std::string& id() const noexcept { return info_.id; }
  const FloorKey& floor_key() const noexcept { return info_.floor_key; }
  const Position& position() const noexcept { return info_.position; }
  const std::string& device_model() const noexcept { return info_.device_model; }
  const std::optional<std::string>& burst_id() const noexcept { return info_.burst_id; }
  const std::optional<int>& scan_index() const noexcept { return info_.scan_index; }
  const FingerprintInfo& info() const noexcept { return info_; }

  std::span<const Reading> readings() const noexcept { return readings_; }
  std::size_t ap_count() const noexcept { return readings_.size(); }
  std::optional<double> rssi(ApId ap) const;

  friend bool operator==(const Fingerprint& l, const Fingerprint& r) {
    return l.info_.id == r.info_.id && l.info_.floor_key == r.info_.floor_key &&
           l.info_.position == r.info_.position && l.info_.device_model == r.info_.device_model &&
           l.info_.burst_id == r.info_.burst_id && l.info_.scan_index == r.info_.scan_index &&
           l.readings_ == r.readings_;
  }

 private:
  FingerprintInfo info_;
  std::vector<Reading> readings_;
};

/// Burst of consecutive scans recorded at one position by one device.
struct Burst {
  std::string burst_id;
  FloorKey floor_key;
  Position position;
  std::string device_model;
  std::vector<Fingerprint> scans;  // ordered by scan_index, contiguous from 0
};

enum class ProximityClass { Close, Far };

std::string_view to_string(ProximityClass c) noexcept;
ProximityClass parse_proximity_class(std::string_view text);

struct FingerprintPair {
  const Fingerprint* a = nullptr;
  const Fingerprint* b = nullptr;
  double distance_m = 0.0;
  ProximityClass label = ProximityClass::Far;

  std::string pair_id() const;
};

/// True when `first` precedes `second` in canonical pair order: fewer
/// detected APs first, ties broken by id ascending.
bool canonical_before(const Fingerprint& first, const Fingerprint& second) noexcept;

/// Intersection of the AP sets, ascending by ApId.
std::vector<ApId> shared_aps(const Fingerprint& a, const Fingerprint& b);

/// Index pairs (position in a.readings(), position in b.readings()) for every
/// shared AP, ascending by ApId.
struct SharedIndex {
  std::size_t in_a;
  std::size_t in_b;
};
std::vector<SharedIndex> shared_indices(const Fingerprint& a, const Fingerprint& b);

std::size_t union_count(const Fingerprint& a, const Fingerprint& b);

}  // namespace wifiprox
