#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wifiprox/feature_table.hpp"
#include "wifiprox/pairing.hpp"
#include "wifiprox/types.hpp"

namespace wifiprox {

/// Column-major training matrix.
struct Dataset {
  std::vector<std::vector<double>> columns;  // columns[feature][row]
  std::vector<ProximityClass> labels;

  static Dataset from_table(const FeatureTable& table);
  std::size_t rows() const noexcept { return labels.size(); }
  std::size_t features() const noexcept { return columns.size(); }
};

/// Binary CART tree stored as a flat pre-order node array (root at 0).
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;   // value <= threshold
    int right = -1;  // value > threshold
    std::uint32_t n_close = 0;
    std::uint32_t n_far = 0;

    bool is_leaf() const noexcept { return feature < 0; }
  };

  DecisionTree() = default;
  explicit DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& leaf_for(std::span<const double> x) const;

  /// Vote in half-units: 2 = Close, 0 = Far, 1 = tied leaf.
  int half_vote(std::span<const double> x) const;

  std::size_t depth() const;
  std::size_t leaf_count() const;

 private:
  std::vector<Node> nodes_;
};

/// Greedy Gini CART on the given rows (duplicates allowed, as produced by a
/// bootstrap) restricted to `feature_subset`. Candidate thresholds are
/// midpoints between consecutive distinct values. Growth stops at pure
/// nodes, nodes with fewer than 2 samples, or when no split lowers the
/// impurity. Ties prefer the lowest feature index, then the lowest
/// threshold, so the result is fully determined by the inputs.
DecisionTree train_tree(const Dataset& data, std::span<const std::size_t> rows,
                        std::span<const std::size_t> feature_subset);

struct EnsembleConfig {
  std::size_t n_estimators = 300;
  std::size_t max_features = 3;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency; never affects the result

  void validate() const;
};

struct Estimator {
  DecisionTree tree;
  std::vector<std::size_t> features;  // ascending
};

/// Attribute-bagging ensemble of decision trees with equal-weight voting.
struct BaggedEnsemble {
  std::vector<std::string> feature_names;
  EnsembleConfig config;
  ClassCounts class_balance;
  std::vector<Estimator> estimators;

  /// Fraction of trees voting Close; a tied leaf contributes half a vote.
  double predict_score(std::span<const double> x) const;

  /// Close iff score >= threshold.
  ProximityClass predict(std::span<const double> x, double threshold = 0.5) const;

  /// Scores for every row of `table`, whose columns are matched to the
  /// model's features by name.
  std::vector<double> score_table(const FeatureTable& table) const;
};

/// Trains n_estimators trees; tree i draws its bootstrap rows and feature
/// subset from a stream derived from (seed, i). Throws validation_error
/// for an empty or single-class table.
BaggedEnsemble train_ensemble(const FeatureTable& table, const EnsembleConfig& config);

inline constexpr int kModelSchemaVersion = 1;

void save_model(std::ostream& out, const BaggedEnsemble& model);
void save_model(const std::filesystem::path& path, const BaggedEnsemble& model);
BaggedEnsemble load_model(std::istream& in, const std::string& source_name);
BaggedEnsemble load_model(const std::filesystem::path& path);

}  // namespace wifiprox
