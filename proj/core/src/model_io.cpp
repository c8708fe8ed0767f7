#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wifiprox/errors.hpp"
#include "wifiprox/model.hpp"

namespace wifiprox {

using nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "wifiprox.model";

ordered_json tree_to_json(const Estimator& e) {
  ordered_json t;
  t["features"] = e.features;
  auto feature = ordered_json::array(), threshold = ordered_json::array(), left = ordered_json::array(),
       right = ordered_json::array(), n_close = ordered_json::array(), n_far = ordered_json::array();
  for (const auto& node : e.tree.nodes()) {
    feature.push_back(node.feature);
    threshold.push_back(node.threshold);
    left.push_back(node.left);
    right.push_back(node.right);
    n_close.push_back(node.n_close);
    n_far.push_back(node.n_far);
  }
  t["feature"] = std::move(feature);
  t["threshold"] = std::move(threshold);
  t["left"] = std::move(left);
  t["right"] = std::move(right);
  t["n_close"] = std::move(n_close);
  t["n_far"] = std::move(n_far);
  return t;
}

Estimator tree_from_json(const nlohmann::json& t, std::size_t n_features, std::size_t index) {
  const std::string where = "tree " + std::to_string(index);
  Estimator e;
  e.features = t.at("features").get<std::vector<std::size_t>>();
  for (std::size_t f : e.features) {
    if (f >= n_features) throw validation_error(where + ": feature index out of range");
  }
  const auto feature = t.at("feature").get<std::vector<int>>();
  const auto threshold = t.at("threshold").get<std::vector<double>>();
  const auto left = t.at("left").get<std::vector<int>>();
  const auto right = t.at("right").get<std::vector<int>>();
  const auto n_close = t.at("n_close").get<std::vector<std::uint32_t>>();
  const auto n_far = t.at("n_far").get<std::vector<std::uint32_t>>();
  const std::size_t count = feature.size();
  if (count == 0 || threshold.size() != count || left.size() != count || right.size() != count ||
      n_close.size() != count || n_far.size() != count) {
    throw validation_error(where + ": node arrays are empty or of unequal length");
  }
  std::vector<DecisionTree::Node> nodes(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& node = nodes[i];
    node = {feature[i], threshold[i], left[i], right[i], n_close[i], n_far[i]};
    if (node.is_leaf()) {
      if (node.n_close + node.n_far == 0) throw validation_error(where + ": empty leaf");
      continue;
    }
    // Children always follow their parent in pre-order, which rules out cycles.
    const auto child_ok = [&](int c) { return c > static_cast<int>(i) && c < static_cast<int>(count); };
    if (!child_ok(node.left) || !child_ok(node.right)) throw validation_error(where + ": bad child index");
    if (std::find(e.features.begin(), e.features.end(), static_cast<std::size_t>(node.feature)) == e.features.end()) {
      throw validation_error(where + ": node tests a feature outside the tree's subset");
    }
  }
  e.tree = DecisionTree(std::move(nodes));
  return e;
}

}  // namespace

void save_model(std::ostream& out, const BaggedEnsemble& model) {
  ordered_json config;
  config["n_estimators"] = model.config.n_estimators;
  config["max_features"] = model.config.max_features;
  config["bootstrap"] = model.config.bootstrap;
  config["seed"] = model.config.seed;
  ordered_json balance;
  balance["close"] = model.class_balance.close;
  balance["far"] = model.class_balance.far;

  // One tree per line keeps the document diffable without pretty-printing
  // megabytes of node arrays.
  out << "{\n";
  out << "\"schema\": " << ordered_json(kSchema).dump() << ",\n";
  out << "\"version\": " << kModelSchemaVersion << ",\n";
  out << "\"config\": " << config.dump() << ",\n";
  out << "\"class_balance\": " << balance.dump() << ",\n";
  out << "\"feature_names\": " << ordered_json(model.feature_names).dump() << ",\n";
  out << "\"trees\": [\n";
  for (std::size_t i = 0; i < model.estimators.size(); ++i) {
    out << tree_to_json(model.estimators[i]).dump() << (i + 1 < model.estimators.size() ? ",\n" : "\n");
  }
  out << "]\n}\n";
}

void save_model(const std::filesystem::path& path, const BaggedEnsemble& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  save_model(out, model);
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

BaggedEnsemble load_model(std::istream& in, const std::string& source_name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(source_name + ": corrupt model document: " + e.what());
  }
  try {
    if (doc.at("schema").get<std::string>() != kSchema) {
      throw validation_error("not a wifiprox model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelSchemaVersion) {
      throw validation_error("model schema version " + std::to_string(version) + " is not supported (expected " +
                             std::to_string(kModelSchemaVersion) + ")");
    }
    BaggedEnsemble model;
    const auto& cfg = doc.at("config");
    model.config.n_estimators = cfg.at("n_estimators").get<std::size_t>();
    model.config.max_features = cfg.at("max_features").get<std::size_t>();
    model.config.bootstrap = cfg.at("bootstrap").get<bool>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    model.class_balance.close = doc.at("class_balance").at("close").get<std::size_t>();
    model.class_balance.far = doc.at("class_balance").at("far").get<std::size_t>();
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    const auto& trees = doc.at("trees");
    if (trees.size() != model.config.n_estimators) {
      throw validation_error("document lists " + std::to_string(trees.size()) + " trees but n_estimators is " +
                             std::to_string(model.config.n_estimators));
    }
    for (std::size_t i = 0; i < trees.size(); ++i) {
      auto e = tree_from_json(trees[i], model.feature_names.size(), i);
      if (e.features.size() > model.config.max_features) {
        throw validation_error("tree " + std::to_string(i) + " uses more than max_features features");
      }
      model.estimators.push_back(std::move(e));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(source_name + ": corrupt model document: " + e.what());
  } catch (const validation_error& e) {
    throw validation_error(source_name + ": " + e.what());
  }
}

BaggedEnsemble load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  return load_model(in, path.string());
}

}  // namespace wifiprox
