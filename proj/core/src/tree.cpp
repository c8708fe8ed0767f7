#include "wifiprox/model.hpp"

#include <algorithm>
#include <numeric>

#include "wifiprox/errors.hpp"

namespace wifiprox {

Dataset Dataset::from_table(const FeatureTable& table) {
  return {table.columns(), table.labels()};
}

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const double> x) const {
  const Node* node = &nodes_.front();
  while (!node->is_leaf()) {
    node = &nodes_[static_cast<std::size_t>(x[static_cast<std::size_t>(node->feature)] <= node->threshold
                                                ? node->left
                                                : node->right)];
  }
  return *node;
}

int DecisionTree::half_vote(std::span<const double> x) const {
  const Node& leaf = leaf_for(x);
  if (leaf.n_close > leaf.n_far) return 2;
  if (leaf.n_close < leaf.n_far) return 0;
  return 1;
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes_[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes_[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes_[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

namespace {

// Sum over children of (n_close^2 + n_far^2) / n. Maximising this is
// equivalent to minimising the weighted Gini impurity.
double purity(double close, double total) noexcept {
  const double far = total - close;
  return (close * close + far * far) / total;
}

struct Work {
  std::size_t begin;
  std::size_t end;
  int parent;
  bool is_left;
};

}  // namespace

DecisionTree train_tree(const Dataset& data, std::span<const std::size_t> rows,
                        std::span<const std::size_t> feature_subset) {
  if (rows.empty()) throw validation_error("cannot train a tree on an empty sample");
  if (feature_subset.empty()) throw config_error("tree feature subset is empty");

  const std::size_t m = rows.size();
  const std::size_t k = feature_subset.size();

  std::vector<std::uint8_t> is_close(m);
  for (std::size_t p = 0; p < m; ++p) is_close[p] = data.labels[rows[p]] == ProximityClass::Close;

  std::vector<std::size_t> features(feature_subset.begin(), feature_subset.end());
  std::sort(features.begin(), features.end());

  // Per-feature values by sample position and presorted position orders.
  std::vector<std::vector<double>> values(k, std::vector<double>(m));
  std::vector<std::vector<std::uint32_t>> order(k, std::vector<std::uint32_t>(m));
  for (std::size_t f = 0; f < k; ++f) {
    const auto& col = data.columns.at(features[f]);
    for (std::size_t p = 0; p < m; ++p) values[f][p] = col[rows[p]];
    std::iota(order[f].begin(), order[f].end(), 0u);
    const auto& v = values[f];
    std::sort(order[f].begin(), order[f].end(), [&](std::uint32_t l, std::uint32_t r) {
      return v[l] < v[r] || (v[l] == v[r] && l < r);
    });
  }

  std::vector<DecisionTree::Node> nodes;
  std::vector<std::uint8_t> goes_left(m);
  std::vector<std::uint32_t> scratch(m);
  std::vector<Work> stack{{0, m, -1, false}};

  while (!stack.empty()) {
    const Work w = stack.back();
    stack.pop_back();
    const int index = static_cast<int>(nodes.size());
    if (w.parent >= 0) {
      (w.is_left ? nodes[static_cast<std::size_t>(w.parent)].left : nodes[static_cast<std::size_t>(w.parent)].right) =
          index;
    }

    const std::size_t n = w.end - w.begin;
    std::size_t n_close = 0;
    for (std::size_t i = w.begin; i < w.end; ++i) n_close += is_close[order[0][i]];

    DecisionTree::Node node;
    node.n_close = static_cast<std::uint32_t>(n_close);
    node.n_far = static_cast<std::uint32_t>(n - n_close);

    if (n < 2 || n_close == 0 || n_close == n) {
      nodes.push_back(node);
      continue;
    }

    const double total = static_cast<double>(n);
    const double parent = purity(static_cast<double>(n_close), total);
    double best = parent + 1e-12 * parent;
    std::size_t best_f = k;
    std::size_t best_i = 0;
    double best_threshold = 0.0;

    for (std::size_t f = 0; f < k; ++f) {
      const auto& ord = order[f];
      const auto& v = values[f];
      std::size_t left_close = 0;
      for (std::size_t i = w.begin; i + 1 < w.end; ++i) {
        left_close += is_close[ord[i]];
        const double here = v[ord[i]];
        const double next = v[ord[i + 1]];
        if (!(here < next)) continue;
        const double nl = static_cast<double>(i + 1 - w.begin);
        const double score = purity(static_cast<double>(left_close), nl) +
                             purity(static_cast<double>(n_close - left_close), total - nl);
        if (score > best) {
          best = score;
          best_f = f;
          best_i = i;
          double mid = here + (next - here) / 2.0;
          if (!(mid < next)) mid = here;
          best_threshold = mid;
        }
      }
    }

    if (best_f == k) {
      nodes.push_back(node);
      continue;
    }

    node.feature = static_cast<int>(features[best_f]);
    node.threshold = best_threshold;
    nodes.push_back(node);

    const std::size_t split = best_i + 1;
    for (std::size_t i = w.begin; i < w.end; ++i) goes_left[order[best_f][i]] = i < split;
    for (std::size_t f = 0; f < k; ++f) {
      if (f == best_f) continue;
      auto& ord = order[f];
      std::size_t l = w.begin;
      std::size_t r = split;
      for (std::size_t i = w.begin; i < w.end; ++i) {
        const std::uint32_t p = ord[i];
        scratch[goes_left[p] ? l++ : r++] = p;
      }
      std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(w.begin),
                scratch.begin() + static_cast<std::ptrdiff_t>(w.end), ord.begin() + static_cast<std::ptrdiff_t>(w.begin));
    }

    // Right pushed first so the left subtree is numbered first (pre-order).
    stack.push_back({split, w.end, index, false});
    stack.push_back({w.begin, split, index, true});
  }
  return DecisionTree(std::move(nodes));
}

}  // namespace wifiprox
