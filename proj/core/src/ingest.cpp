#include "wifiprox/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wifiprox/errors.hpp"

namespace wifiprox {

using nlohmann::json;
using nlohmann::ordered_json;

SkipReport& SkipReport::operator+=(const SkipReport& other) {
  rows_read += other.rows_read;
  records_loaded += other.records_loaded;
  empty_rows += other.empty_rows;
  malformed_rows += other.malformed_rows;
  short_bursts += other.short_bursts;
  oversized_bursts += other.oversized_bursts;
  return *this;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  return in;
}

double parse_double(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw validation_error(what + ": '" + t + "' is not a finite number");
  }
  return v;
}

std::string location(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

Fingerprint fingerprint_from_json(const json& rec) {
  FingerprintInfo info;
  info.id = rec.at("id").get<std::string>();
  info.floor_key = {rec.at("dataset").get<std::string>(), rec.at("building").get<std::string>(),
                    rec.at("floor").get<std::string>()};
  info.position = {rec.at("x_m").get<double>(), rec.at("y_m").get<double>()};
  info.device_model = rec.at("device").get<std::string>();
  if (const auto it = rec.find("burst"); it != rec.end() && !it->is_null()) {
    info.burst_id = it->get<std::string>();
  }
  if (const auto it = rec.find("scan"); it != rec.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw validation_error("field 'scan' must be an integer or null");
    info.scan_index = it->get<int>();
  }
  std::vector<Reading> readings;
  for (const auto& ap : rec.at("aps")) {
    const auto& rssi = ap.at("rssi");
    if (!rssi.is_number()) throw validation_error("field 'rssi' must be a number");
    readings.push_back({ApId::parse(ap.at("bssid").get<std::string>()), rssi.get<double>()});
  }
  return Fingerprint(std::move(info), std::move(readings));
}

std::vector<std::string> split_row(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::uint64_t ap_index_from_column(const std::string& name, const std::string& prefix, std::size_t ordinal) {
  const std::string suffix = name.substr(prefix.size());
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(suffix.data(), suffix.data() + suffix.size(), v);
  if (!suffix.empty() && ec == std::errc() && ptr == suffix.data() + suffix.size()) return v;
  return ordinal;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw config_error(location(path.string(), lineno) + ": expected 'key = value'");
    }
    kv[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
  }

  DatasetManifest m;
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  const auto required = [&](const std::string& key) {
    auto v = take(key);
    if (!v || v->empty()) throw config_error(path.string() + ": missing required key '" + key + "'");
    return *v;
  };

  m.dataset_id = required("dataset_id");
  const std::string format = required("format");
  if (format == "canonical_jsonl") {
    m.format = DatasetFormat::canonical_jsonl;
  } else if (format == "wide_csv") {
    m.format = DatasetFormat::wide_csv;
  } else {
    throw config_error(path.string() + ": unknown format '" + format + "'");
  }
  m.path = required("path");
  if (m.path.is_relative()) m.path = path.parent_path() / m.path;

  try {
    if (auto v = take("not_detected_sentinel")) m.wide.not_detected_sentinel = parse_double(*v, "not_detected_sentinel");
    if (auto v = take("coordinate_scale")) m.wide.coordinate_scale = parse_double(*v, "coordinate_scale");
  } catch (const validation_error& e) {
    throw config_error(path.string() + ": " + e.what());
  }
  if (auto v = take("ap_column_prefix")) m.wide.ap_column_prefix = *v;
  if (auto v = take("x_column")) m.wide.x_column = *v;
  if (auto v = take("y_column")) m.wide.y_column = *v;
  if (auto v = take("building_column")) m.wide.building_column = *v;
  if (auto v = take("floor_column")) m.wide.floor_column = *v;
  if (auto v = take("device_column")) m.wide.device_column = *v;
  if (auto v = take("default_device")) m.wide.default_device = *v;
  if (auto v = take("delimiter")) {
    if (*v == "tab" || *v == "\\t") {
      m.wide.delimiter = '\t';
    } else if (v->size() == 1) {
      m.wide.delimiter = (*v)[0];
    } else {
      throw config_error(path.string() + ": delimiter must be a single character or 'tab'");
    }
  }
  if (!kv.empty()) throw config_error(path.string() + ": unknown key '" + kv.begin()->first + "'");
  if (!(m.wide.coordinate_scale > 0.0)) throw config_error(path.string() + ": coordinate_scale must be > 0");
  if (m.wide.ap_column_prefix.empty()) throw config_error(path.string() + ": ap_column_prefix is empty");
  if (!std::filesystem::exists(m.path)) throw io_error("data file '" + m.path.string() + "' does not exist");
  return m;
}

LoadResult parse_canonical(std::istream& in, const std::string& source_name) {
  LoadResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ++result.report.rows_read;
    try {
      const json rec = json::parse(line);
      auto fp = fingerprint_from_json(rec);
      if (fp.ap_count() == 0) {
        ++result.report.empty_rows;
        continue;
      }
      result.fingerprints.push_back(std::move(fp));
    } catch (const json::exception& e) {
      throw validation_error(location(source_name, lineno) + ": malformed record: " + e.what());
    } catch (const validation_error& e) {
      throw validation_error(location(source_name, lineno) + ": " + e.what());
    }
  }
  result.report.records_loaded = result.fingerprints.size();
  return result;
}

LoadResult load_canonical(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_canonical(in, path.string());
}

std::string to_canonical_line(const Fingerprint& fp) {
  ordered_json rec;
  rec["id"] = fp.id();
  rec["dataset"] = fp.floor_key().dataset;
  rec["building"] = fp.floor_key().building;
  rec["floor"] = fp.floor_key().floor;
  rec["x_m"] = fp.position().x_m;
  rec["y_m"] = fp.position().y_m;
  rec["device"] = fp.device_model();
  rec["burst"] = fp.burst_id() ? ordered_json(*fp.burst_id()) : ordered_json(nullptr);
  rec["scan"] = fp.scan_index() ? ordered_json(*fp.scan_index()) : ordered_json(nullptr);
  auto aps = ordered_json::array();
  for (const auto& r : fp.readings()) {
    ordered_json ap;
    ap["bssid"] = r.ap.to_string();
    ap["rssi"] = r.rssi_dbm;
    aps.push_back(std::move(ap));
  }
  rec["aps"] = std::move(aps);
  return rec.dump();
}

void write_canonical(std::ostream& out, const std::vector<Fingerprint>& fps) {
  for (const auto& fp : fps) out << to_canonical_line(fp) << '\n';
}

void write_canonical(const std::filesystem::path& path, const std::vector<Fingerprint>& fps) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  write_canonical(out, fps);
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

LoadResult parse_wide_csv(std::istream& in, const DatasetManifest& manifest) {
  const auto& opt = manifest.wide;
  const std::string source = manifest.path.string();
  std::string line;
  if (!std::getline(in, line)) throw validation_error(source + ": missing header row");
  const auto header = split_row(line, opt.delimiter);

  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw validation_error(source + ": missing configured column '" + name + "'");
  };
  const std::size_t x_col = column(opt.x_column);
  const std::size_t y_col = column(opt.y_column);
  const std::optional<std::size_t> building_col =
      opt.building_column ? std::optional(column(*opt.building_column)) : std::nullopt;
  const std::optional<std::size_t> floor_col =
      opt.floor_column ? std::optional(column(*opt.floor_column)) : std::nullopt;
  const std::optional<std::size_t> device_col =
      opt.device_column ? std::optional(column(*opt.device_column)) : std::nullopt;

  std::vector<std::pair<std::size_t, ApId>> ap_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = trim(header[i]);
    if (name.rfind(opt.ap_column_prefix, 0) == 0) {
      ap_cols.emplace_back(i, ApId::from_index(ap_index_from_column(name, opt.ap_column_prefix, ap_cols.size() + 1)));
    }
  }
  if (ap_cols.empty()) {
    throw validation_error(source + ": no column starts with prefix '" + opt.ap_column_prefix + "'");
  }

  LoadResult result;
  std::size_t lineno = 1;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ++data_row;
    ++result.report.rows_read;
    const auto cells = split_row(line, opt.delimiter);
    if (cells.size() != header.size()) {
      ++result.report.malformed_rows;
      continue;
    }
    const std::string where = location(source, lineno);
    std::vector<Reading> readings;
    for (const auto& [col, ap] : ap_cols) {
      const double v = parse_double(cells[col], where + ": RSSI cell '" + trim(header[col]) + "'");
      if (v == opt.not_detected_sentinel) continue;
      readings.push_back({ap, v});
    }
    if (readings.empty()) {
      ++result.report.empty_rows;
      continue;
    }
    FingerprintInfo info;
    info.id = manifest.dataset_id + ":" + std::to_string(data_row);
    info.floor_key = {manifest.dataset_id, building_col ? trim(cells[*building_col]) : "0",
                      floor_col ? trim(cells[*floor_col]) : "0"};
    info.position = {parse_double(cells[x_col], where + ": x coordinate") * opt.coordinate_scale,
                     parse_double(cells[y_col], where + ": y coordinate") * opt.coordinate_scale};
    info.device_model = device_col ? trim(cells[*device_col]) : opt.default_device;
    try {
      result.fingerprints.emplace_back(std::move(info), std::move(readings));
    } catch (const validation_error& e) {
      throw validation_error(where + ": " + e.what());
    }
  }
  result.report.records_loaded = result.fingerprints.size();
  return result;
}

LoadResult load_wide_csv(const DatasetManifest& manifest) {
  auto in = open_input(manifest.path);
  return parse_wide_csv(in, manifest);
}

LoadResult load_dataset(const DatasetManifest& manifest) {
  if (manifest.format == DatasetFormat::canonical_jsonl) return load_canonical(manifest.path);
  return load_wide_csv(manifest);
}

std::vector<Burst> group_bursts(const std::vector<Fingerprint>& fps) {
  std::map<std::pair<FloorKey, std::string>, std::vector<const Fingerprint*>> groups;
  for (const auto& fp : fps) {
    if (!fp.burst_id() || !fp.scan_index()) {
      throw validation_error("fingerprint '" + fp.id() + "' has no burst id or scan index");
    }
    groups[{fp.floor_key(), *fp.burst_id()}].push_back(&fp);
  }

  std::vector<Burst> bursts;
  bursts.reserve(groups.size());
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end(),
              [](const Fingerprint* l, const Fingerprint* r) { return *l->scan_index() < *r->scan_index(); });
    const Fingerprint& first = *members.front();
    Burst burst{key.second, key.first, first.position(), first.device_model(), {}};
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Fingerprint& fp = *members[i];
      if (fp.position() != burst.position) {
        throw validation_error("burst '" + burst.burst_id + "' mixes positions (scan '" + fp.id() + "')");
      }
      if (fp.device_model() != burst.device_model) {
        throw validation_error("burst '" + burst.burst_id + "' mixes devices (scan '" + fp.id() + "')");
      }
      if (*fp.scan_index() != static_cast<int>(i)) {
        throw validation_error("burst '" + burst.burst_id + "' scan indices are not contiguous from 0");
      }
      burst.scans.push_back(fp);
    }
    bursts.push_back(std::move(burst));
  }
  return bursts;
}

namespace {

PseudoFingerprint aggregate(const Burst& burst, std::size_t first, std::size_t half) {
  std::map<ApId, std::vector<double>> observed;
  std::vector<std::string> sources;
  for (std::size_t i = first; i < first + kSubBurstScans; ++i) {
    const auto& scan = burst.scans[i];
    sources.push_back(scan.id());
    for (const auto& r : scan.readings()) observed[r.ap].push_back(r.rssi_dbm);
  }
  std::vector<Reading> readings;
  readings.reserve(observed.size());
  for (auto& [ap, values] : observed) readings.push_back({ap, median_of(std::move(values))});

  FingerprintInfo info;
  info.id = burst.floor_key.to_string() + "/" + burst.burst_id + "#s" + std::to_string(half);
  info.floor_key = burst.floor_key;
  info.position = burst.position;
  info.device_model = burst.device_model;
  info.burst_id = burst.burst_id;
  return {Fingerprint(std::move(info), std::move(readings)), std::move(sources)};
}

}  // namespace

std::optional<std::pair<PseudoFingerprint, PseudoFingerprint>> split_sub_bursts(const Burst& burst) {
  if (burst.scans.size() < 2 * kSubBurstScans) return std::nullopt;
  return std::pair{aggregate(burst, 0, 0), aggregate(burst, kSubBurstScans, 1)};
}

LoadResult pseudo_fingerprints(const std::vector<Fingerprint>& fps) {
  LoadResult result;
  for (const auto& burst : group_bursts(fps)) {
    ++result.report.rows_read;
    if (burst.scans.size() > 9) ++result.report.oversized_bursts;
    auto halves = split_sub_bursts(burst);
    if (!halves) {
      ++result.report.short_bursts;
      continue;
    }
    for (auto* p : {&halves->first, &halves->second}) {
      if (p->fingerprint.ap_count() == 0) {
        ++result.report.empty_rows;
        continue;
      }
      result.fingerprints.push_back(std::move(p->fingerprint));
    }
  }
  result.report.records_loaded = result.fingerprints.size();
  return result;
}

}  // namespace wifiprox
