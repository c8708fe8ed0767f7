#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wifiprox/types.hpp"

namespace wifiprox {

/// Rows or bursts that were dropped during loading. Nothing is dropped
/// silently; every loader reports into one of these counters.
struct SkipReport {
  std::size_t rows_read = 0;
  std::size_t records_loaded = 0;
  std::size_t empty_rows = 0;      // no detected AP
  std::size_t malformed_rows = 0;  // wrong cell count in a wide CSV
  std::size_t short_bursts = 0;    // fewer than 8 scans, not split
  std::size_t oversized_bursts = 0;  // more than 9 scans, extra scans ignored

  SkipReport& operator+=(const SkipReport& other);
  std::size_t skipped() const noexcept { return empty_rows + malformed_rows + short_bursts; }
};

enum class DatasetFormat { canonical_jsonl, wide_csv };

struct WideCsvOptions {
  double not_detected_sentinel = 100.0;
  std::string ap_column_prefix = "WAP";
  std::string x_column = "LONGITUDE";
  std::string y_column = "LATITUDE";
  double coordinate_scale = 1.0;  // multiplier to meters
  std::optional<std::string> building_column;
  std::optional<std::string> floor_column;
  std::optional<std::string> device_column;
  std::string default_device = "unknown";
  char delimiter = ',';
};

struct DatasetManifest {
  std::string dataset_id;
  DatasetFormat format = DatasetFormat::wide_csv;
  std::filesystem::path path;
  WideCsvOptions wide;
};

/// Reads a manifest of `key = value` lines ('#' starts a comment). Relative
/// data paths resolve against the manifest's directory.
///
/// Keys: dataset_id, format, path, not_detected_sentinel, ap_column_prefix,
/// x_column, y_column, coordinate_scale, building_column, floor_column,
/// device_column, default_device, delimiter.
DatasetManifest load_manifest(const std::filesystem::path& path);

struct LoadResult {
  std::vector<Fingerprint> fingerprints;
  SkipReport report;
};

/// Line-delimited JSON records, one fingerprint per line. Blank lines are
/// ignored. Records with no APs are skipped and counted; malformed lines and
/// invariant violations throw validation_error naming the line number.
LoadResult load_canonical(const std::filesystem::path& path);
LoadResult parse_canonical(std::istream& in, const std::string& source_name);

void write_canonical(std::ostream& out, const std::vector<Fingerprint>& fps);
void write_canonical(const std::filesystem::path& path, const std::vector<Fingerprint>& fps);
std::string to_canonical_line(const Fingerprint& fp);

/// Wide-matrix CSV (one row per scan, one column per AP).
LoadResult load_wide_csv(const DatasetManifest& manifest);
LoadResult parse_wide_csv(std::istream& in, const DatasetManifest& manifest);

/// Loads whichever format the manifest declares.
LoadResult load_dataset(const DatasetManifest& manifest);

/// Groups scans into bursts keyed by (floor_key, burst_id). Fingerprints
/// without a burst id or scan index are rejected. Throws validation_error on
/// conflicting positions/devices or non-contiguous scan indices.
std::vector<Burst> group_bursts(const std::vector<Fingerprint>& fps);

struct PseudoFingerprint {
  Fingerprint fingerprint;
  std::vector<std::string> source_scan_ids;
};

inline constexpr std::size_t kSubBurstScans = 4;

/// Splits a burst into two pseudo-fingerprints built from scans 0-3 and 4-7;
/// any later scan is discarded. Each AP's RSSI is the median of the values
/// observed for it in that half (mean of the middle two for even counts).
/// Returns nullopt when the burst has fewer than 8 scans.
std::optional<std::pair<PseudoFingerprint, PseudoFingerprint>> split_sub_bursts(const Burst& burst);

/// Groups bursts and splits every one of them, recording short and oversized
/// bursts in the report.
LoadResult pseudo_fingerprints(const std::vector<Fingerprint>& fps);

}  // namespace wifiprox
