#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "wifiprox/errors.hpp"
#include "wifiprox/model.hpp"
#include "wifiprox/parallel.hpp"
#include "wifiprox/random.hpp"

namespace wifiprox {

void EnsembleConfig::validate() const {
  if (n_estimators == 0) throw config_error("n_estimators must be at least 1");
  if (max_features == 0) throw config_error("max_features must be at least 1");
}

double BaggedEnsemble::predict_score(std::span<const double> x) const {
  if (x.size() != feature_names.size()) {
    throw validation_error("feature vector has " + std::to_string(x.size()) + " values, model expects " +
                           std::to_string(feature_names.size()));
  }
  if (estimators.empty()) return 0.0;
  long half_votes = 0;
  for (const auto& e : estimators) half_votes += e.tree.half_vote(x);
  return static_cast<double>(half_votes) / (2.0 * static_cast<double>(estimators.size()));
}

ProximityClass BaggedEnsemble::predict(std::span<const double> x, double threshold) const {
  return predict_score(x) >= threshold ? ProximityClass::Close : ProximityClass::Far;
}

std::vector<double> BaggedEnsemble::score_table(const FeatureTable& table) const {
  const FeatureTable* view = &table;
  FeatureTable projected;
  if (table.names != feature_names) {
    projected = table.project(feature_names);
    view = &projected;
  }
  std::vector<double> scores;
  scores.reserve(view->rows.size());
  for (const auto& row : view->rows) scores.push_back(predict_score(row.values));
  return scores;
}

BaggedEnsemble train_ensemble(const FeatureTable& table, const EnsembleConfig& config) {
  config.validate();
  if (table.rows.empty()) throw validation_error("training table is empty");
  if (table.names.empty()) throw validation_error("training table has no features");

  BaggedEnsemble model;
  model.feature_names = table.names;
  model.config = config;
  for (const auto& r : table.rows) (r.label == ProximityClass::Close ? model.class_balance.close : model.class_balance.far)++;
  if (model.class_balance.close == 0 || model.class_balance.far == 0) {
    throw validation_error("training table must contain both Close and Far samples");
  }

  const Dataset data = Dataset::from_table(table);
  const std::size_t n = data.rows();
  const std::size_t per_tree = std::min(config.max_features, data.features());

  model.estimators.resize(config.n_estimators);
  parallel_for(config.n_estimators, config.threads, [&](std::size_t t) {
    Rng rng = make_stream(config.seed, t);
    auto features = sample_without_replacement(rng, data.features(), per_tree);
    std::sort(features.begin(), features.end());
    std::vector<std::size_t> rows(n);
    if (config.bootstrap) {
      for (auto& r : rows) r = uniform_index(rng, n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    model.estimators[t] = {train_tree(data, rows, features), std::move(features)};
  });
  return model;
}

}  // namespace wifiprox
