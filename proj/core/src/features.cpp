#include "wifiprox/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "wifiprox/errors.hpp"
#include "wifiprox/stats.hpp"

namespace wifiprox {

std::string_view to_string(TransformVariant v) noexcept {
  switch (v) {
    case TransformVariant::none: return "none";
    case TransformVariant::single_ls: return "single_ls";
    case TransformVariant::single_half_ls: return "single_half_ls";
    case TransformVariant::double_ls: return "double_ls";
  }
  return "none";
}

namespace {

constexpr std::array<const char*, 4> kCoefficientNames = {"cosine", "pearson", "spearman", "kendall"};
constexpr std::array<const char*, 4> kCorrelationVectors = {"corr_rssi", "corr_pair_diff", "corr_pair_ratio",
                                                            "corr_rank"};
constexpr std::array<const char*, 7> kSummaryNames = {"min",           "max",       "mean",         "median",
                                                      "harmonic_mean", "sample_sd", "population_sd"};
constexpr std::array<const char*, 3> kDifferenceVectors = {"diff_rssi", "diff_pair_diff", "diff_pair_ratio"};

std::string two_digit(std::size_t v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02zu", v);
  return buf;
}

std::vector<std::string> build_base_names() {
  std::vector<std::string> n;
  n.push_back("dist.manhattan");
  n.push_back("dist.euclidean");
  for (std::size_t z = 1; z <= kThresholdZCount; ++z) n.push_back("top_ap_within.z" + two_digit(z));
  for (std::size_t z = 1; z <= kThresholdZCount; ++z) n.push_back("rssi_within_pct.z" + two_digit(z));
  for (std::size_t k = 1; k <= kTopKCount; ++k) n.push_back("shared_top_k.k" + std::to_string(k));
  n.push_back("redpin.max_min");
  n.push_back("redpin.min_max");
  for (const char* vec : kCorrelationVectors) {
    for (const char* coef : kCoefficientNames) n.push_back(std::string(vec) + "." + coef);
  }
  for (const char* vec : kDifferenceVectors) {
    for (const char* stat : kSummaryNames) n.push_back(std::string(vec) + "." + stat);
  }
  return n;
}

std::vector<std::string> build_names() {
  std::vector<std::string> n = {"ap.shared_count.indep", "ap.union_count.indep", "ap.nonshared_count.indep",
                                "ap.count_difference.indep", "ap.jaccard.indep"};
  for (TransformVariant v : kTransformVariants) {
    for (const auto& base : rssi_feature_base_names()) n.push_back(base + "." + std::string(to_string(v)));
  }
  n.push_back("device.identical.indep");
  n.push_back("re3.score.indep");
  return n;
}

// RSSI values of both fingerprints after a per-fingerprint affine map.
// `x` is the canonical first fingerprint.
struct PairView {
  std::span<const Reading> x_readings;
  std::span<const Reading> y_readings;
  std::vector<double> xv;  // aligned with x_readings
  std::vector<double> yv;
  std::vector<double> sx;  // shared APs, ascending ApId
  std::vector<double> sy;
  std::vector<ApId> shared_ids;
};

PairView make_view(const Fingerprint& x, const Fingerprint& y, std::span<const SharedIndex> shared,
                   const LinearFit& fx, const LinearFit& fy) {
  PairView v;
  v.x_readings = x.readings();
  v.y_readings = y.readings();
  v.xv.reserve(v.x_readings.size());
  v.yv.reserve(v.y_readings.size());
  for (const auto& r : v.x_readings) v.xv.push_back(fx(r.rssi_dbm));
  for (const auto& r : v.y_readings) v.yv.push_back(fy(r.rssi_dbm));
  v.sx.reserve(shared.size());
  v.sy.reserve(shared.size());
  for (const auto& s : shared) {
    v.sx.push_back(v.xv[s.in_a]);
    v.sy.push_back(v.yv[s.in_b]);
    v.shared_ids.push_back(v.x_readings[s.in_a].ap);
  }
  return v;
}

PairView raw_view(const Fingerprint& x, const Fingerprint& y) {
  const auto shared = shared_indices(x, y);
  return make_view(x, y, shared, {}, {});
}

void distances(const PairView& v, const FeatureConfig& cfg, double* out) {
  double l1 = 0.0, l2 = 0.0;
  auto add = [&](double d) {
    l1 += std::abs(d);
    l2 += d * d;
  };
  if (cfg.distance_mode == DistanceMode::shared) {
    for (std::size_t i = 0; i < v.sx.size(); ++i) add(v.sx[i] - v.sy[i]);
  } else {
    std::size_t i = 0, j = 0;
    while (i < v.x_readings.size() || j < v.y_readings.size()) {
      if (j == v.y_readings.size() || (i < v.x_readings.size() && v.x_readings[i].ap < v.y_readings[j].ap)) {
        add(v.xv[i++] - cfg.union_floor_dbm);
      } else if (i == v.x_readings.size() || v.y_readings[j].ap < v.x_readings[i].ap) {
        add(cfg.union_floor_dbm - v.yv[j++]);
      } else {
        add(v.xv[i++] - v.yv[j++]);
      }
    }
  }
  out[0] = l1;
  out[1] = std::sqrt(l2);
}

void top_ap_within(const PairView& v, double* out) {
  std::fill(out, out + kThresholdZCount, 0.0);
  if (v.sx.empty()) return;
  const double max_x = *std::max_element(v.xv.begin(), v.xv.end());
  const double max_y = *std::max_element(v.yv.begin(), v.yv.end());
  double best = INFINITY;
  for (std::size_t i = 0; i < v.sx.size(); ++i) {
    best = std::min(best, std::max(max_x - v.sx[i], max_y - v.sy[i]));
  }
  for (std::size_t z = 1; z <= kThresholdZCount; ++z) out[z - 1] = best <= static_cast<double>(z) ? 1.0 : 0.0;
}

void within_pct(const PairView& v, double* out) {
  std::fill(out, out + kThresholdZCount, 0.0);
  if (v.sx.empty()) return;
  std::array<std::size_t, kThresholdZCount> hits{};
  for (std::size_t i = 0; i < v.sx.size(); ++i) {
    const double d = std::abs(v.sx[i] - v.sy[i]);
    for (std::size_t z = 1; z <= kThresholdZCount; ++z) {
      if (d <= static_cast<double>(z)) ++hits[z - 1];
    }
  }
  const double n = static_cast<double>(v.sx.size());
  for (std::size_t z = 0; z < kThresholdZCount; ++z) out[z] = static_cast<double>(hits[z]) / n;
}

std::vector<ApId> strongest(std::span<const Reading> readings, std::span<const double> values, std::size_t k) {
  std::vector<std::size_t> idx(readings.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::size_t take = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                    [&](std::size_t l, std::size_t r) {
                      if (values[l] != values[r]) return values[l] > values[r];
                      return readings[l].ap < readings[r].ap;
                    });
  std::vector<ApId> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(readings[idx[i]].ap);
  return out;
}

void shared_top_k(const PairView& v, double* out) {
  const auto top_x = strongest(v.x_readings, v.xv, kTopKCount);
  const auto top_y = strongest(v.y_readings, v.yv, kTopKCount);
  for (std::size_t k = 1; k <= kTopKCount; ++k) {
    if (top_x.size() < k || top_y.size() < k) {
      out[k - 1] = 0.0;
      continue;
    }
    std::vector<ApId> sx(top_x.begin(), top_x.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<ApId> sy(top_y.begin(), top_y.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    out[k - 1] = sx == sy ? 1.0 : 0.0;
  }
}

double redpin(std::span<const Reading> p, std::span<const double> pv, std::span<const Reading> q,
              std::span<const double> qv, const FeatureConfig& cfg) {
  if (p.empty()) return 0.0;
  double score = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (j < q.size() && q[j].ap < p[i].ap) ++j;
    if (j < q.size() && q[j].ap == p[i].ap) {
      score += std::abs(pv[i] - qv[j]) <= cfg.redpin_tolerance_db ? cfg.redpin_match : cfg.redpin_loose_match;
    } else {
      score += cfg.redpin_miss;
    }
  }
  return score / static_cast<double>(p.size());
}

void redpin_pair(const PairView& v, const FeatureConfig& cfg, double* out) {
  // x is the fingerprint with fewer APs (min), y the one with more (max).
  out[0] = redpin(v.y_readings, v.yv, v.x_readings, v.xv, cfg);
  out[1] = redpin(v.x_readings, v.xv, v.y_readings, v.yv, cfg);
}

double ratio_denominator(double r, const FeatureConfig& cfg) noexcept {
  return r == 0.0 ? cfg.ratio_zero_clamp_dbm : r;
}

std::vector<double> pair_differences(std::span<const double> s) {
  std::vector<double> out;
  const std::size_t n = s.size();
  if (n >= 2) out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(std::abs(s[i] - s[j]));
  }
  return out;
}

std::vector<double> pair_ratios(std::span<const double> s, const FeatureConfig& cfg) {
  std::vector<double> out;
  const std::size_t n = s.size();
  if (n >= 2) out.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) out.push_back(s[i] / ratio_denominator(s[j], cfg));
    }
  }
  return out;
}

// rank(i) = number of values <= s[i], so equal values share a rank.
std::vector<double> weakness_ranks(std::span<const double> s) {
  std::vector<double> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> ranks(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    ranks[i] = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), s[i]) - sorted.begin());
  }
  return ranks;
}

void normalize_unit(std::vector<double>& v) {
  double norm = 0.0;
  for (double e : v) norm += e * e;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& e : v) e /= norm;
  }
}

void coefficients(std::span<const double> x, std::span<const double> y, double* out) {
  if (x.size() < 2) {
    std::fill(out, out + 4, 0.0);
    return;
  }
  out[0] = stats::cosine_similarity(x, y);
  out[1] = stats::pearson(x, y);
  const auto ranked = stats::rank_correlations(x, y);
  out[2] = ranked.spearman;
  out[3] = ranked.kendall;
}

struct DerivedVectors {
  std::vector<double> pd_x, pd_y, pr_x, pr_y;
};

DerivedVectors derive(const PairView& v, const FeatureConfig& cfg) {
  return {pair_differences(v.sx), pair_differences(v.sy), pair_ratios(v.sx, cfg), pair_ratios(v.sy, cfg)};
}

void correlations(const PairView& v, const DerivedVectors& d, double* out) {
  coefficients(v.sx, v.sy, out);
  coefficients(d.pd_x, d.pd_y, out + 4);
  coefficients(d.pr_x, d.pr_y, out + 8);

  const auto rank_x = weakness_ranks(v.sx);
  const auto rank_y = weakness_ranks(v.sy);
  std::vector<std::size_t> order(v.sx.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // strongest first; equal ranks keep ApId order
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return rank_x[l] > rank_x[r]; });
  std::vector<double> rx, ry;
  rx.reserve(order.size());
  ry.reserve(order.size());
  for (std::size_t i : order) {
    rx.push_back(rank_x[i]);
    ry.push_back(rank_y[i]);
  }
  normalize_unit(rx);
  normalize_unit(ry);
  coefficients(rx, ry, out + 12);
}

void write_summary(std::span<const double> vec, double* out) {
  const auto s = stats::summarize(vec);
  out[0] = s.min;
  out[1] = s.max;
  out[2] = s.mean;
  out[3] = s.median;
  out[4] = s.harmonic_mean;
  out[5] = s.sample_sd;
  out[6] = s.population_sd;
}

std::vector<double> abs_difference(std::span<const double> x, std::span<const double> y) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::abs(x[i] - y[i]);
  return out;
}

void differences(const PairView& v, const DerivedVectors& d, double* out) {
  write_summary(abs_difference(v.sx, v.sy), out);
  write_summary(abs_difference(d.pd_x, d.pd_y), out + 7);
  write_summary(abs_difference(d.pr_x, d.pr_y), out + 14);
}

void rssi_features(const PairView& v, const FeatureConfig& cfg, double* out) {
  distances(v, cfg, out);
  out += 2;
  top_ap_within(v, out);
  out += kThresholdZCount;
  within_pct(v, out);
  out += kThresholdZCount;
  shared_top_k(v, out);
  out += kTopKCount;
  redpin_pair(v, cfg, out);
  out += 2;
  const auto derived = derive(v, cfg);
  correlations(v, derived, out);
  out += 16;
  differences(v, derived, out);
}

double re3_of(std::span<const double> sx, std::span<const double> sy, const FeatureConfig& cfg) {
  const std::size_t n = sx.size();
  if (n < 2) return 0.0;
  double agree = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = sx[i] - sx[j];
      const double dy = sy[i] - sy[j];
      const bool tx = dx == 0.0;
      const bool ty = dy == 0.0;
      if (tx && ty) {
        agree += 1.0;
      } else if (tx || ty) {
        agree += cfg.re3_half_weight;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        agree += 1.0;
      }
    }
  }
  return agree / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

std::string fold_device(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool all_equal(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

}  // namespace

const std::vector<std::string>& rssi_feature_base_names() {
  static const std::vector<std::string> names = build_base_names();
  return names;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = build_names();
  return names;
}

std::optional<std::size_t> feature_index(std::string_view name) {
  static const auto index = [] {
    std::unordered_map<std::string, std::size_t> m;
    const auto& names = feature_names();
    for (std::size_t i = 0; i < names.size(); ++i) m.emplace(names[i], i);
    return m;
  }();
  const auto it = index.find(std::string(name));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

double FeatureVector::operator[](std::string_view name) const {
  const auto idx = feature_index(name);
  if (!idx || *idx >= values.size()) throw config_error("unknown feature '" + std::string(name) + "'");
  return values[*idx];
}

std::array<double, 5> ap_detection_features(const Fingerprint& a, const Fingerprint& b) {
  const double shared = static_cast<double>(shared_indices(a, b).size());
  const double na = static_cast<double>(a.ap_count());
  const double nb = static_cast<double>(b.ap_count());
  const double uni = na + nb - shared;
  return {shared, uni, uni - shared, std::abs(na - nb), uni > 0.0 ? shared / uni : 0.0};
}

std::array<double, 2> manhattan_euclidean(const Fingerprint& a, const Fingerprint& b, const FeatureConfig& cfg) {
  std::array<double, 2> out{};
  distances(raw_view(a, b), cfg, out.data());
  return out;
}

std::array<double, kThresholdZCount> shared_top_ap_within_z(const Fingerprint& a, const Fingerprint& b) {
  std::array<double, kThresholdZCount> out{};
  top_ap_within(raw_view(a, b), out.data());
  return out;
}

std::array<double, kThresholdZCount> rssi_within_z_pct(const Fingerprint& a, const Fingerprint& b) {
  std::array<double, kThresholdZCount> out{};
  within_pct(raw_view(a, b), out.data());
  return out;
}

std::array<double, kTopKCount> has_shared_top_k(const Fingerprint& a, const Fingerprint& b) {
  std::array<double, kTopKCount> out{};
  shared_top_k(raw_view(a, b), out.data());
  return out;
}

double redpin_score(const Fingerprint& p, const Fingerprint& q, const FeatureConfig& cfg) {
  std::vector<double> pv, qv;
  for (const auto& r : p.readings()) pv.push_back(r.rssi_dbm);
  for (const auto& r : q.readings()) qv.push_back(r.rssi_dbm);
  return redpin(p.readings(), pv, q.readings(), qv, cfg);
}

std::array<double, 2> redpin_scores(const Fingerprint& a, const Fingerprint& b, const FeatureConfig& cfg) {
  const bool keep = canonical_before(a, b);
  std::array<double, 2> out{};
  redpin_pair(raw_view(keep ? a : b, keep ? b : a), cfg, out.data());
  return out;
}

std::array<double, 16> correlation_features(const Fingerprint& a, const Fingerprint& b, const FeatureConfig& cfg) {
  const auto v = raw_view(a, b);
  std::array<double, 16> out{};
  correlations(v, derive(v, cfg), out.data());
  return out;
}

std::array<double, 21> difference_features(const Fingerprint& a, const Fingerprint& b, const FeatureConfig& cfg) {
  const auto v = raw_view(a, b);
  std::array<double, 21> out{};
  differences(v, derive(v, cfg), out.data());
  return out;
}

double identical_devices(const Fingerprint& a, const Fingerprint& b) {
  return fold_device(a.device_model()) == fold_device(b.device_model()) ? 1.0 : 0.0;
}

double re3(const Fingerprint& a, const Fingerprint& b, const FeatureConfig& cfg) {
  const auto v = raw_view(a, b);
  return re3_of(v.sx, v.sy, cfg);
}

LinearFit fit_least_squares(std::span<const double> source, std::span<const double> target) {
  const std::size_t n = source.size();
  if (n == 0) return {1.0, 0.0};
  double ms = 0.0, mt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ms += source[i];
    mt += target[i];
  }
  ms /= static_cast<double>(n);
  mt /= static_cast<double>(n);
  if (all_equal(source)) {
    if (n == 1) return {1.0, target[0] - source[0]};
    return {1.0, mt - ms};
  }
  double sst = 0.0, sss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ds = source[i] - ms;
    sst += ds * (target[i] - mt);
    sss += ds * ds;
  }
  const double slope = sst / sss;
  return {slope, mt - slope * ms};
}

DeviceFits fit_least_squares(const Fingerprint& first, const Fingerprint& second) {
  const auto v = raw_view(first, second);
  return {fit_least_squares(v.sx, v.sy), fit_least_squares(v.sy, v.sx)};
}

FeatureVector extract(const Fingerprint& a, const Fingerprint& b, const FeatureConfig& cfg) {
  const bool keep = canonical_before(a, b);
  const Fingerprint& x = keep ? a : b;
  const Fingerprint& y = keep ? b : a;
  const auto shared = shared_indices(x, y);

  FeatureVector fv;
  fv.values.resize(kFeatureCount);
  double* out = fv.values.data();

  const auto detection = ap_detection_features(x, y);
  out = std::copy(detection.begin(), detection.end(), out);

  const PairView raw = make_view(x, y, shared, {}, {});
  const DeviceFits fits{fit_least_squares(raw.sx, raw.sy), fit_least_squares(raw.sy, raw.sx)};
  const LinearFit identity{};
  const LinearFit half{fits.forward.slope / 2.0, fits.forward.intercept / 2.0};

  for (TransformVariant variant : kTransformVariants) {
    switch (variant) {
      case TransformVariant::none:
        rssi_features(raw, cfg, out);
        break;
      case TransformVariant::single_ls:
        rssi_features(make_view(x, y, shared, fits.forward, identity), cfg, out);
        break;
      case TransformVariant::single_half_ls:
        rssi_features(make_view(x, y, shared, half, identity), cfg, out);
        break;
      case TransformVariant::double_ls:
        rssi_features(make_view(x, y, shared, fits.forward, fits.backward), cfg, out);
        break;
    }
    out += kRssiFeatureCount;
  }

  *out++ = identical_devices(x, y);
  *out++ = re3_of(raw.sx, raw.sy, cfg);

  for (double& v : fv.values) {
    if (!std::isfinite(v)) v = 0.0;
  }
  return fv;
}

FeatureVector extract(const FingerprintPair& pair, const FeatureConfig& cfg) {
  auto fv = extract(*pair.a, *pair.b, cfg);
  fv.label = pair.label;
  return fv;
}

}  // namespace wifiprox
