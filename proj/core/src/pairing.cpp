#include "wifiprox/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "wifiprox/errors.hpp"
#include "wifiprox/random.hpp"

namespace wifiprox {

void PairingConfig::validate() const {
  if (!(close_max_m > 0.0 && close_max_m < far_min_m && far_min_m <= far_max_m)) {
    throw config_error("pairing thresholds must satisfy 0 < close_max < far_min <= far_max");
  }
}

double pair_distance(const Fingerprint& a, const Fingerprint& b) {
  if (a.floor_key() != b.floor_key()) {
    throw validation_error("fingerprints '" + a.id() + "' and '" + b.id() + "' are on different floors");
  }
  const double dx = a.position().x_m - b.position().x_m;
  const double dy = a.position().y_m - b.position().y_m;
  return std::sqrt(dx * dx + dy * dy);
}

std::optional<ProximityClass> classify_distance(double d, const PairingConfig& cfg) noexcept {
  if (d >= 0.0 && d <= cfg.close_max_m) return ProximityClass::Close;
  if (d >= cfg.far_min_m && d <= cfg.far_max_m) return ProximityClass::Far;
  return std::nullopt;
}

FingerprintPair make_pair(const Fingerprint& a, const Fingerprint& b, const PairingConfig& cfg) {
  const double d = pair_distance(a, b);
  const auto label = classify_distance(d, cfg);
  if (!label) {
    throw validation_error("pair '" + a.id() + "'/'" + b.id() + "' lies in a dropped distance band");
  }
  const bool keep = canonical_before(a, b);
  return {keep ? &a : &b, keep ? &b : &a, d, *label};
}

std::vector<FingerprintPair> enumerate_pairs(const std::vector<Fingerprint>& fps, const PairingConfig& cfg) {
  cfg.validate();
  std::map<FloorKey, std::vector<const Fingerprint*>> floors;
  for (const auto& fp : fps) {
    if (fp.ap_count() > 0) floors[fp.floor_key()].push_back(&fp);
  }

  std::vector<FingerprintPair> pairs;
  for (auto& [key, members] : floors) {
    std::sort(members.begin(), members.end(),
              [](const Fingerprint* l, const Fingerprint* r) { return l->id() < r->id(); });
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Fingerprint& a = *members[i];
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const Fingerprint& b = *members[j];
        if (a.id() == b.id()) throw validation_error("duplicate fingerprint id '" + a.id() + "'");
        if (cfg.exclude_same_burst && a.burst_id() && a.burst_id() == b.burst_id()) continue;
        const double dx = a.position().x_m - b.position().x_m;
        const double dy = a.position().y_m - b.position().y_m;
        const double d = std::sqrt(dx * dx + dy * dy);
        const auto label = classify_distance(d, cfg);
        if (!label) continue;
        const bool keep = canonical_before(a, b);
        pairs.push_back({keep ? &a : &b, keep ? &b : &a, d, *label});
      }
    }
  }
  return pairs;
}

ClassCounts count_labels(const std::vector<FingerprintPair>& pairs) noexcept {
  ClassCounts c;
  for (const auto& p : pairs) (p.label == ProximityClass::Close ? c.close : c.far)++;
  return c;
}

std::vector<bool> sample_by_class(const std::vector<ProximityClass>& labels, std::size_t n_close,
                                  std::size_t n_far, std::uint64_t seed) {
  std::vector<std::size_t> close_idx, far_idx;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == ProximityClass::Close ? close_idx : far_idx).push_back(i);
  }
  if (n_close > close_idx.size()) {
    throw config_error("requested " + std::to_string(n_close) + " Close samples but only " +
                       std::to_string(close_idx.size()) + " are available");
  }
  if (n_far > far_idx.size()) {
    throw config_error("requested " + std::to_string(n_far) + " Far samples but only " +
                       std::to_string(far_idx.size()) + " are available");
  }
  std::vector<bool> selected(labels.size(), false);
  Rng close_rng = make_stream(seed, 0);
  for (std::size_t k : sample_without_replacement(close_rng, close_idx.size(), n_close)) {
    selected[close_idx[k]] = true;
  }
  Rng far_rng = make_stream(seed, 1);
  for (std::size_t k : sample_without_replacement(far_rng, far_idx.size(), n_far)) {
    selected[far_idx[k]] = true;
  }
  return selected;
}

TrainingSplit sample_training_set(const std::vector<FingerprintPair>& pairs, std::size_t n_close,
                                  std::size_t n_far, std::uint64_t seed) {
  std::vector<ProximityClass> labels;
  labels.reserve(pairs.size());
  for (const auto& p : pairs) labels.push_back(p.label);
  const auto selected = sample_by_class(labels, n_close, n_far, seed);
  TrainingSplit split;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    (selected[i] ? split.train : split.remainder).push_back(pairs[i]);
  }
  return split;
}

void write_pairs(std::ostream& out, const std::vector<FingerprintPair>& pairs) {
  for (const auto& p : pairs) {
    nlohmann::ordered_json rec;
    rec["a"] = p.a->id();
    rec["b"] = p.b->id();
    rec["distance_m"] = p.distance_m;
    rec["label"] = std::string(to_string(p.label));
    out << rec.dump() << '\n';
  }
}

void write_pairs(const std::filesystem::path& path, const std::vector<FingerprintPair>& pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  write_pairs(out, pairs);
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

std::vector<FingerprintPair> read_pairs(std::istream& in, const std::vector<Fingerprint>& fps,
                                        const std::string& source_name) {
  std::unordered_map<std::string, const Fingerprint*> by_id;
  by_id.reserve(fps.size());
  for (const auto& fp : fps) by_id.emplace(fp.id(), &fp);

  std::vector<FingerprintPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source_name + ":" + std::to_string(lineno);
    try {
      const auto rec = nlohmann::json::parse(line);
      const auto ia = by_id.find(rec.at("a").get<std::string>());
      const auto ib = by_id.find(rec.at("b").get<std::string>());
      if (ia == by_id.end() || ib == by_id.end()) {
        throw validation_error("pair references an unknown fingerprint id");
      }
      const bool keep = canonical_before(*ia->second, *ib->second);
      pairs.push_back({keep ? ia->second : ib->second, keep ? ib->second : ia->second,
                       rec.at("distance_m").get<double>(),
                       parse_proximity_class(rec.at("label").get<std::string>())});
    } catch (const nlohmann::json::exception& e) {
      throw validation_error(where + ": malformed pair record: " + e.what());
    } catch (const validation_error& e) {
      throw validation_error(where + ": " + e.what());
    }
  }
  return pairs;
}

std::vector<FingerprintPair> read_pairs(const std::filesystem::path& path, const std::vector<Fingerprint>& fps) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  return read_pairs(in, fps, path.string());
}

}  // namespace wifiprox
