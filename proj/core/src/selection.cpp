#include "wifiprox/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wifiprox/errors.hpp"
#include "wifiprox/parallel.hpp"

namespace wifiprox {

void MrmrConfig::validate() const {
  if (k == 0) throw config_error("mRMR k must be at least 1");
  if (method == Discretization::mean_pm_sigma && !(alpha >= 0.0 && std::isfinite(alpha))) {
    throw config_error("mRMR alpha must be a finite non-negative number");
  }
  if (method == Discretization::equal_frequency && bins < 2) throw config_error("mRMR needs at least 2 bins");
}

std::vector<int> discretize(std::span<const double> values, const MrmrConfig& cfg) {
  std::vector<int> states(values.size(), 0);
  if (values.empty()) return states;

  std::vector<double> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() <= 3) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      states[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), values[i]) - distinct.begin());
    }
    return states;
  }

  if (cfg.method == Discretization::mean_pm_sigma) {
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    const double lo = mean - cfg.alpha * sd;
    const double hi = mean + cfg.alpha * sd;
    for (std::size_t i = 0; i < values.size(); ++i) states[i] = values[i] < lo ? 0 : (values[i] > hi ? 2 : 1);
    return states;
  }

  // Equal frequency: bin by the rank of the first occurrence of each value so
  // equal values always share a bin.
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
  const std::size_t n = values.size();
  std::size_t first = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && values[order[i]] != values[order[i - 1]]) first = i;
    states[order[i]] = static_cast<int>(first * cfg.bins / n);
  }
  return states;
}

double mutual_information(std::span<const int> x, std::span<const int> y) {
  if (x.size() != y.size()) throw validation_error("mutual information needs equal-length inputs");
  if (x.empty()) return 0.0;
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  if (*xmin < 0 || *ymin < 0) throw validation_error("state indices must be non-negative");
  const auto nx = static_cast<std::size_t>(*xmax) + 1;
  const auto ny = static_cast<std::size_t>(*ymax) + 1;

  std::vector<double> joint(nx * ny, 0.0), px(nx, 0.0), py(ny, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto a = static_cast<std::size_t>(x[i]);
    const auto b = static_cast<std::size_t>(y[i]);
    joint[a * ny + b] += 1.0;
    px[a] += 1.0;
    py[b] += 1.0;
  }
  const double n = static_cast<double>(x.size());
  double mi = 0.0;
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      const double c = joint[a * ny + b];
      if (c == 0.0) continue;
      mi += (c / n) * std::log2(c * n / (px[a] * py[b]));
    }
  }
  return std::max(mi, 0.0);
}

std::vector<MrmrStep> mrmr_rank(const std::vector<std::vector<double>>& columns,
                                const std::vector<std::string>& names, std::span<const ProximityClass> labels,
                                const MrmrConfig& cfg) {
  cfg.validate();
  const std::size_t f = columns.size();
  if (f < 2) throw validation_error("feature selection needs at least two features");
  if (names.size() != f) throw validation_error("feature names and columns differ in count");
  for (const auto& c : columns) {
    if (c.size() != labels.size()) throw validation_error("feature column and labels differ in length");
  }
  std::vector<int> label_states(labels.size());
  std::size_t close = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    label_states[i] = labels[i] == ProximityClass::Close ? 1 : 0;
    close += static_cast<std::size_t>(label_states[i]);
  }
  if (close == 0 || close == labels.size()) throw validation_error("feature selection needs both classes");

  std::vector<std::vector<int>> states(f);
  std::vector<double> relevance(f);
  parallel_for(f, cfg.threads, [&](std::size_t j) {
    states[j] = discretize(columns[j], cfg);
    relevance[j] = mutual_information(states[j], label_states);
  });

  const std::size_t k = std::min(cfg.k, f);
  std::vector<bool> taken(f, false);
  std::vector<double> redundancy_sum(f, 0.0);
  std::vector<MrmrStep> out;
  out.reserve(k);

  for (std::size_t step = 0; step < k; ++step) {
    std::size_t best = f;
    double best_score = 0.0, best_red = 0.0;
    for (std::size_t j = 0; j < f; ++j) {
      if (taken[j]) continue;
      const double red = step == 0 ? 0.0 : redundancy_sum[j] / static_cast<double>(step);
      const double score = relevance[j] - red;
      if (best == f || score > best_score || (score == best_score && names[j] < names[best])) {
        best = j;
        best_score = score;
        best_red = red;
      }
    }
    taken[best] = true;
    out.push_back({names[best], relevance[best], best_red, best_score});
    if (step + 1 == k) break;
    parallel_for(f, cfg.threads, [&](std::size_t j) {
      if (!taken[j]) redundancy_sum[j] += mutual_information(states[j], states[best]);
    });
  }
  return out;
}

std::vector<std::string> mrmr_select(const FeatureTable& table, const MrmrConfig& cfg) {
  const auto steps = mrmr_rank(table.columns(), table.names, table.labels(), cfg);
  std::vector<std::string> names;
  names.reserve(steps.size());
  for (const auto& s : steps) names.push_back(s.name);
  return names;
}

}  // namespace wifiprox
