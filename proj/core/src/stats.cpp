#include "wifiprox/stats.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace wifiprox::stats {

namespace {

double clamp_unit(double v) noexcept { return std::clamp(v, -1.0, 1.0); }

bool constant(std::span<const double> x) noexcept {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *lo == *hi;
}

double mean_of(std::span<const double> x) noexcept {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Number of tied pairs, sum of t(t-1)/2 over runs of equal adjacent values.
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq equal) {
  std::int64_t ties = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal(i - 1, i)) {
      ++run;
    } else {
      ties += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
      run = 1;
    }
  }
  return ties;
}

struct Keyed {
  double key;
  std::uint32_t index;
};

// Stable bottom-up merge sort by key; returns the number of inversions
// removed (pairs with a strictly smaller key behind a larger one).
std::int64_t merge_count(std::vector<Keyed>& v) {
  const std::size_t n = v.size();
  std::vector<Keyed> buf(n);
  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j].key < v[i].key) {
          buf[k++] = v[j++];
          swaps += static_cast<std::int64_t>(mid - i);
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    v.swap(buf);
  }
  return swaps;
}

// Writes average ranks for a sequence already sorted by key and returns the
// number of tied pairs.
std::int64_t assign_ranks(const std::vector<Keyed>& sorted, std::vector<double>& ranks) {
  const std::size_t n = sorted.size();
  std::int64_t ties = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && sorted[j].key == sorted[i].key) ++j;
    // positions i..j-1 (0-based) share rank mean((i+1)..j)
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[sorted[k].index] = rank;
    const auto t = static_cast<std::int64_t>(j - i);
    ties += t * (t - 1) / 2;
    i = j;
  }
  return ties;
}

}  // namespace

double cosine_similarity(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0.0 || ny == 0.0) return 0.0;
  return clamp_unit(dot / (std::sqrt(nx) * std::sqrt(ny)));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  if (x.size() < 2 || constant(x) || constant(y)) return 0.0;
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return clamp_unit(sxy / std::sqrt(sxx * syy));
}

RankCorrelations rank_correlations(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  if (n < 2) return {};

  // Order by (x, y); x ranks and x / joint ties come from this order, and
  // the y sequence in this order feeds the inversion count.
  struct Point {
    double x, y;
    std::uint32_t index;
  };
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {x[i], y[i], static_cast<std::uint32_t>(i)};
  std::sort(pts.begin(), pts.end(),
            [](const Point& l, const Point& r) { return l.x < r.x || (l.x == r.x && l.y < r.y); });

  std::vector<Keyed> seq(n);
  for (std::size_t i = 0; i < n; ++i) seq[i] = {pts[i].x, pts[i].index};
  std::vector<double> rx(n), ry(n);
  const std::int64_t x_ties = assign_ranks(seq, rx);
  const std::int64_t xy_ties = tied_pairs(
      n, [&](std::size_t i, std::size_t j) { return pts[i].x == pts[j].x && pts[i].y == pts[j].y; });

  for (std::size_t i = 0; i < n; ++i) seq[i] = {pts[i].y, pts[i].index};
  const std::int64_t swaps = merge_count(seq);
  const std::int64_t y_ties = assign_ranks(seq, ry);

  RankCorrelations out;
  out.spearman = pearson(rx, ry);
  const std::int64_t total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t dx = total - x_ties;
  const std::int64_t dy = total - y_ties;
  if (dx != 0 && dy != 0) {
    const std::int64_t numerator = total - x_ties - y_ties + xy_ties - 2 * swaps;
    out.kendall = clamp_unit(static_cast<double>(numerator) /
                             std::sqrt(static_cast<double>(dx) * static_cast<double>(dy)));
  }
  return out;
}

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<Keyed> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = {x[i], static_cast<std::uint32_t>(i)};
  std::sort(sorted.begin(), sorted.end(), [](const Keyed& l, const Keyed& r) { return l.key < r.key; });
  std::vector<double> ranks(n);
  assign_ranks(sorted, ranks);
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) { return rank_correlations(x, y).spearman; }

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  return rank_correlations(x, y).kendall;
}

double median(std::span<const double> x) {
  if (x.empty()) return 0.0;
  std::vector<double> v(x.begin(), x.end());
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return (lower + upper) / 2.0;
}

Summary summarize(std::span<const double> x) {
  Summary s;
  if (x.empty()) return s;
  const double n = static_cast<double>(x.size());
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  s.min = *lo;
  s.max = *hi;
  s.mean = mean_of(x);
  s.median = median(x);

  bool has_zero = false;
  double inv = 0.0;
  double ss = 0.0;
  for (double v : x) {
    if (v == 0.0) has_zero = true;
    else inv += 1.0 / v;
    const double d = v - s.mean;
    ss += d * d;
  }
  s.harmonic_mean = (has_zero || inv == 0.0) ? 0.0 : n / inv;
  if (s.min == s.max) ss = 0.0;
  s.population_sd = std::sqrt(ss / n);
  s.sample_sd = x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return s;
}

}  // namespace wifiprox::stats
