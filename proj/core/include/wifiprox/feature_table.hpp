#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wifiprox/features.hpp"
#include "wifiprox/types.hpp"

namespace wifiprox {

struct FeatureRow {
  std::string pair_id;
  double distance_m = 0.0;
  ProximityClass label = ProximityClass::Far;
  std::vector<double> values;
};

/// Labelled feature matrix, one row per pair.
struct FeatureTable {
  std::vector<std::string> names;
  std::vector<FeatureRow> rows;

  std::size_t feature_count() const noexcept { return names.size(); }
  std::vector<ProximityClass> labels() const;

  /// Column-major copy of the values, columns[f][row].
  std::vector<std::vector<double>> columns() const;

  /// Keeps only the named columns, in the given order. Throws config_error
  /// for names not in the table.
  FeatureTable project(const std::vector<std::string>& keep) const;

  /// Rows whose flag is true.
  FeatureTable subset(const std::vector<bool>& keep) const;
};

/// Extracts the full registry for every pair. Work is spread over `threads`
/// workers (0 = hardware concurrency); row order always follows `pairs`.
FeatureTable featurize(const std::vector<FingerprintPair>& pairs, const FeatureConfig& cfg = {},
                       unsigned threads = 0);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// Text table: header "pair_id,distance_m,label,<feature names...>", then one
// comma-separated row per pair.
void write_feature_table(std::ostream& out, const FeatureTable& table);
void write_feature_table(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable read_feature_table(std::istream& in, const std::string& source_name);
FeatureTable read_feature_table(const std::filesystem::path& path);

}  // namespace wifiprox
