#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "wifiprox/errors.hpp"
#include "wifiprox/model.hpp"
#include "wifiprox/random.hpp"

using namespace wifiprox;

namespace {

constexpr auto Close = ProximityClass::Close;
constexpr auto Far = ProximityClass::Far;

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), std::size_t{0});
  return r;
}

// Close iff f0 + noise > 0; f1 is pure noise.
FeatureTable noisy_table(std::size_t n, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  FeatureTable t;
  t.names = {"signal", "noise", "weak"};
  for (std::size_t i = 0; i < n; ++i) {
    const double s = normal(rng, 0, 1);
    const double label_noise = normal(rng, 0, 0.3);
    const auto label = s + label_noise > 0 ? Close : Far;
    t.rows.push_back({"r" + std::to_string(i), 1.0, label, {s, normal(rng, 0, 1), s + normal(rng, 0, 2)}});
  }
  return t;
}

}  // namespace

TEST(Tree, SeparableDataGivesPureLeavesAtMidpoint) {
  Dataset d;
  d.columns = {{1, 2, 3, 10, 11, 12}};
  d.labels = {Far, Far, Far, Close, Close, Close};
  const std::vector<std::size_t> feats{0};
  const auto tree = train_tree(d, all_rows(6), feats);
  ASSERT_EQ(tree.nodes().size(), 3u);
  EXPECT_EQ(tree.nodes()[0].feature, 0);
  EXPECT_EQ(tree.nodes()[0].threshold, 6.5);
  EXPECT_EQ(tree.depth(), 1u);
  EXPECT_EQ(tree.leaf_count(), 2u);
  const std::vector<double> lo{0.0}, hi{100.0}, edge{6.5};
  EXPECT_EQ(tree.half_vote(lo), 0);
  EXPECT_EQ(tree.half_vote(hi), 2);
  EXPECT_EQ(tree.half_vote(edge), 0);
}

TEST(Tree, SolvesConjunctionWithTwoLevels) {
  Dataset d;
  d.columns = {{0, 0, 1, 1, 0, 0, 1, 1}, {0, 1, 0, 1, 0, 1, 0, 1}};
  d.labels = {Far, Far, Far, Close, Far, Far, Far, Close};
  const std::vector<std::size_t> feats{0, 1};
  const auto tree = train_tree(d, all_rows(8), feats);
  for (std::size_t i = 0; i < 8; ++i) {
    const std::vector<double> x{d.columns[0][i], d.columns[1][i]};
    EXPECT_EQ(tree.half_vote(x), d.labels[i] == Close ? 2 : 0) << i;
  }
  EXPECT_EQ(tree.depth(), 2u);
}

TEST(Tree, IdenticalRowsWithMixedLabelsGiveTiedLeaf) {
  Dataset d;
  d.columns = {{1, 1}};
  d.labels = {Close, Far};
  const std::vector<std::size_t> feats{0};
  const auto tree = train_tree(d, all_rows(2), feats);
  EXPECT_EQ(tree.nodes().size(), 1u);
  const std::vector<double> x{1};
  EXPECT_EQ(tree.half_vote(x), 1);
}

TEST(Tree, BootstrapDuplicatesCount) {
  Dataset d;
  d.columns = {{1, 2}};
  d.labels = {Close, Far};
  const std::vector<std::size_t> rows{0, 0, 0};
  const std::vector<std::size_t> feats{0};
  const auto tree = train_tree(d, rows, feats);
  ASSERT_EQ(tree.nodes().size(), 1u);
  EXPECT_EQ(tree.nodes()[0].n_close, 3u);
}

TEST(Ensemble, LearnsAndIsDeterministic) {
  const auto train = noisy_table(600, 1);
  const auto test = noisy_table(400, 2);
  EnsembleConfig cfg;
  cfg.n_estimators = 40;
  cfg.max_features = 2;
  cfg.seed = 5;
  cfg.threads = 1;
  const auto model = train_ensemble(train, cfg);
  EXPECT_EQ(model.estimators.size(), 40u);
  EXPECT_EQ(model.class_balance.close + model.class_balance.far, 600u);
  const auto scores = model.score_table(test);
  std::size_t right = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    EXPECT_GE(scores[i], 0.0);
    EXPECT_LE(scores[i], 1.0);
    right += (scores[i] >= 0.5) == (test.rows[i].label == Close);
  }
  EXPECT_GT(static_cast<double>(right) / 400.0, 0.8);

  cfg.threads = 3;
  const auto again = train_ensemble(train, cfg);
  std::ostringstream a, b;
  save_model(a, model);
  save_model(b, again);
  EXPECT_EQ(a.str(), b.str());
  for (const auto& e : model.estimators) {
    EXPECT_EQ(e.features.size(), 2u);
    EXPECT_TRUE(std::is_sorted(e.features.begin(), e.features.end()));
  }
}

TEST(Ensemble, ScoresReorderedColumnsByName) {
  const auto train = noisy_table(200, 3);
  EnsembleConfig cfg;
  cfg.n_estimators = 10;
  cfg.threads = 1;
  const auto model = train_ensemble(train, cfg);
  const auto test = noisy_table(50, 4);
  const auto shuffled = test.project({"weak", "signal", "noise"});
  EXPECT_EQ(model.score_table(test), model.score_table(shuffled));
  const auto missing = test.project({"signal", "noise"});
  EXPECT_THROW(model.score_table(missing), config_error);
  const std::vector<double> wrong_size{1.0};
  EXPECT_THROW(model.predict_score(wrong_size), validation_error);
}

TEST(Ensemble, RejectsDegenerateInput) {
  FeatureTable one_class;
  one_class.names = {"f"};
  one_class.rows.push_back({"a", 1, Close, {1}});
  one_class.rows.push_back({"b", 1, Close, {2}});
  EXPECT_THROW(train_ensemble(one_class, {}), validation_error);
  EXPECT_THROW(train_ensemble(FeatureTable{{"f"}, {}}, {}), validation_error);
  EnsembleConfig bad;
  bad.n_estimators = 0;
  EXPECT_THROW(train_ensemble(noisy_table(20, 1), bad), config_error);
}

TEST(ModelFile, RoundTripPreservesPredictions) {
  const auto train = noisy_table(300, 6);
  EnsembleConfig cfg;
  cfg.n_estimators = 15;
  cfg.seed = 9;
  cfg.threads = 1;
  const auto model = train_ensemble(train, cfg);
  std::stringstream buf;
  save_model(buf, model);
  const std::string first = buf.str();
  const auto loaded = load_model(buf, "mem");
  EXPECT_EQ(loaded.feature_names, model.feature_names);
  EXPECT_EQ(loaded.config.seed, 9u);
  EXPECT_EQ(loaded.score_table(train), model.score_table(train));
  std::ostringstream again;
  save_model(again, loaded);
  EXPECT_EQ(again.str(), first);
}

TEST(ModelFile, CorruptInputIsRejected) {
  const auto model = train_ensemble(noisy_table(100, 7), EnsembleConfig{3, 2, true, 1, 1});
  std::ostringstream buf;
  save_model(buf, model);
  const std::string good = buf.str();

  std::istringstream truncated(good.substr(0, good.size() / 2));
  EXPECT_THROW(load_model(truncated, "mem"), validation_error);

  std::string wrong_version = good;
  wrong_version.replace(wrong_version.find("\"version\": 1"), 12, "\"version\": 99");
  std::istringstream v(wrong_version);
  EXPECT_THROW(load_model(v, "mem"), validation_error);

  std::string bad_child = good;
  const auto pos = bad_child.find("\"left\":[");
  ASSERT_NE(pos, std::string::npos);
  bad_child.replace(pos, 8, "\"left\":[999,");
  std::istringstream c(bad_child);
  EXPECT_THROW(load_model(c, "mem"), validation_error);

  std::istringstream not_json("hello");
  EXPECT_THROW(load_model(not_json, "mem"), validation_error);
  EXPECT_THROW(load_model(std::filesystem::path("/nonexistent/model.json")), io_error);
}
