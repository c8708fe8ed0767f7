#include "wifiprox/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "wifiprox/errors.hpp"

namespace wifiprox {

namespace {

int hex_digit(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

ApId ApId::parse(std::string_view text) {
  std::uint64_t value = 0;
  int octets = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find_first_of(":-", pos);
    if (end == std::string_view::npos) end = text.size();
    const auto part = text.substr(pos, end - pos);
    if (part.empty() || part.size() > 2 || octets == 6) {
      throw validation_error("invalid BSSID '" + std::string(text) + "'");
    }
    int octet = 0;
    for (char c : part) {
      const int d = hex_digit(c);
      if (d < 0) throw validation_error("invalid BSSID '" + std::string(text) + "'");
      octet = octet * 16 + d;
    }
    value = (value << 8) | static_cast<std::uint64_t>(octet);
    ++octets;
    pos = end + 1;
  }
  if (octets != 6) throw validation_error("invalid BSSID '" + std::string(text) + "'");
  return ApId(value);
}

ApId ApId::from_index(std::uint64_t index) {
  if (index >= (std::uint64_t{1} << 48)) {
    throw validation_error("AP index " + std::to_string(index) + " exceeds 48 bits");
  }
  return ApId(index);
}

std::string ApId::to_string() const {
  char buf[18];
  std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x",
                static_cast<unsigned>((value_ >> 40) & 0xff), static_cast<unsigned>((value_ >> 32) & 0xff),
                static_cast<unsigned>((value_ >> 24) & 0xff), static_cast<unsigned>((value_ >> 16) & 0xff),
                static_cast<unsigned>((value_ >> 8) & 0xff), static_cast<unsigned>(value_ & 0xff));
  return std::string(buf, 17);
}

std::string FloorKey::to_string() const { return dataset + "/" + building + "/" + floor; }

Fingerprint::Fingerprint(FingerprintInfo info, std::vector<Reading> readings)
    : info_(std::move(info)), readings_(std::move(readings)) {
  if (info_.id.empty()) throw validation_error("fingerprint id is empty");
  if (info_.id.find_first_of(",\"\n\r") != std::string::npos) {
    throw validation_error("fingerprint id '" + info_.id + "' contains a reserved character");
  }
  if (!std::isfinite(info_.position.x_m) || !std::isfinite(info_.position.y_m)) {
    throw validation_error("fingerprint '" + info_.id + "' has a non-finite position");
  }
  if (info_.scan_index && *info_.scan_index < 0) {
    throw validation_error("fingerprint '" + info_.id + "' has a negative scan index");
  }
  std::sort(readings_.begin(), readings_.end(),
            [](const Reading& l, const Reading& r) { return l.ap < r.ap; });
  for (std::size_t i = 0; i < readings_.size(); ++i) {
    if (!std::isfinite(readings_[i].rssi_dbm)) {
      throw validation_error("fingerprint '" + info_.id + "' has a non-finite RSSI for " +
                             readings_[i].ap.to_string());
    }
    if (i > 0 && readings_[i].ap == readings_[i - 1].ap) {
      throw validation_error("fingerprint '" + info_.id + "' lists AP " + readings_[i].ap.to_string() +
                             " more than once");
    }
  }
}

std::optional<double> Fingerprint::rssi(ApId ap) const {
  const auto it = std::lower_bound(readings_.begin(), readings_.end(), ap,
                                   [](const Reading& r, ApId id) { return r.ap < id; });
  if (it == readings_.end() || it->ap != ap) return std::nullopt;
  return it->rssi_dbm;
}

std::string_view to_string(ProximityClass c) noexcept {
  return c == ProximityClass::Close ? "Close" : "Far";
}

ProximityClass parse_proximity_class(std::string_view text) {
  if (text == "Close") return ProximityClass::Close;
  if (text == "Far") return ProximityClass::Far;
  throw validation_error("unknown proximity class '" + std::string(text) + "'");
}

std::string FingerprintPair::pair_id() const { return a->id() + "|" + b->id(); }

bool canonical_before(const Fingerprint& first, const Fingerprint& second) noexcept {
  if (first.ap_count() != second.ap_count()) return first.ap_count() < second.ap_count();
  return first.id() < second.id();
}

std::vector<SharedIndex> shared_indices(const Fingerprint& a, const Fingerprint& b) {
  std::vector<SharedIndex> out;
  const auto ra = a.readings();
  const auto rb = b.readings();
  std::size_t i = 0, j = 0;
  while (i < ra.size() && j < rb.size()) {
    if (ra[i].ap < rb[j].ap) {
      ++i;
    } else if (rb[j].ap < ra[i].ap) {
      ++j;
    } else {
      out.push_back({i, j});
      ++i;
      ++j;
    }
  }
  return out;
}

std::vector<ApId> shared_aps(const Fingerprint& a, const Fingerprint& b) {
  std::vector<ApId> out;
  for (const auto& s : shared_indices(a, b)) out.push_back(a.readings()[s.in_a].ap);
  return out;
}

std::size_t union_count(const Fingerprint& a, const Fingerprint& b) {
  return a.ap_count() + b.ap_count() - shared_indices(a, b).size();
}

}  // namespace wifiprox
