#include "wifiprox/feature_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "wifiprox/errors.hpp"
#include "wifiprox/parallel.hpp"

namespace wifiprox {

std::vector<ProximityClass> FeatureTable::labels() const {
  std::vector<ProximityClass> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.label);
  return out;
}

std::vector<std::vector<double>> FeatureTable::columns() const {
  std::vector<std::vector<double>> cols(names.size(), std::vector<double>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t f = 0; f < names.size(); ++f) cols[f][r] = rows[r].values[f];
  }
  return cols;
}

FeatureTable FeatureTable::project(const std::vector<std::string>& keep) const {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], i);
  std::vector<std::size_t> cols;
  for (const auto& name : keep) {
    const auto it = index.find(name);
    if (it == index.end()) throw config_error("feature '" + name + "' is not in the table");
    cols.push_back(it->second);
  }
  FeatureTable out;
  out.names = keep;
  out.rows.reserve(rows.size());
  for (const auto& r : rows) {
    FeatureRow row{r.pair_id, r.distance_m, r.label, {}};
    row.values.reserve(cols.size());
    for (std::size_t c : cols) row.values.push_back(r.values[c]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

FeatureTable FeatureTable::subset(const std::vector<bool>& keep) const {
  FeatureTable out;
  out.names = names;
  for (std::size_t i = 0; i < rows.size() && i < keep.size(); ++i) {
    if (keep[i]) out.rows.push_back(rows[i]);
  }
  return out;
}

FeatureTable featurize(const std::vector<FingerprintPair>& pairs, const FeatureConfig& cfg, unsigned threads) {
  FeatureTable table;
  table.names = feature_names();
  table.rows.resize(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto& p = pairs[i];
    table.rows[i] = {p.pair_id(), p.distance_m, p.label, extract(p, cfg).values};
  });
  return table;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw validation_error("cannot format value");
  return std::string(buf, ptr);
}

namespace {

double parse_cell(std::string_view cell, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    throw validation_error(where + ": '" + std::string(cell) + "' is not a finite number");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(pos));
      return cells;
    }
    cells.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

}  // namespace

void write_feature_table(std::ostream& out, const FeatureTable& table) {
  out << "pair_id,distance_m,label";
  for (const auto& n : table.names) out << ',' << n;
  out << '\n';
  std::string line;
  for (const auto& row : table.rows) {
    line.clear();
    line += row.pair_id;
    line += ',';
    line += format_double(row.distance_m);
    line += ',';
    line += to_string(row.label);
    for (double v : row.values) {
      line += ',';
      line += format_double(v);
    }
    line += '\n';
    out << line;
  }
}

void write_feature_table(const std::filesystem::path& path, const FeatureTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  write_feature_table(out, table);
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

FeatureTable read_feature_table(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) throw validation_error(source_name + ": missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 3 || header[0] != "pair_id" || header[1] != "distance_m" || header[2] != "label") {
    throw validation_error(source_name + ": header must start with pair_id,distance_m,label");
  }
  FeatureTable table;
  for (std::size_t i = 3; i < header.size(); ++i) table.names.emplace_back(header[i]);

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(lineno);
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw validation_error(where + ": expected " + std::to_string(header.size()) + " cells, found " +
                             std::to_string(cells.size()));
    }
    FeatureRow row;
    row.pair_id = std::string(cells[0]);
    row.distance_m = parse_cell(cells[1], where);
    try {
      row.label = parse_proximity_class(cells[2]);
    } catch (const validation_error& e) {
      throw validation_error(where + ": " + e.what());
    }
    row.values.reserve(table.names.size());
    for (std::size_t i = 3; i < cells.size(); ++i) row.values.push_back(parse_cell(cells[i], where));
    table.rows.push_back(std::move(row));
  }
  return table;
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  return read_feature_table(in, path.string());
}

}  // namespace wifiprox
