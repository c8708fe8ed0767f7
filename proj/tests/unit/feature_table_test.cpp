#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "wifiprox/errors.hpp"
#include "wifiprox/feature_table.hpp"
#include "wifiprox/pairing.hpp"
#include "wifiprox/random.hpp"

using namespace wifiprox;

namespace {

FeatureTable small_table() {
  FeatureTable t;
  t.names = {"f.a", "f.b", "f.c"};
  t.rows.push_back({"x|y", 1.5, ProximityClass::Close, {0.1, -3.0, 1e-17}});
  t.rows.push_back({"x|z", 7.25, ProximityClass::Far, {1.0 / 3.0, 12345.678, -0.0}});
  return t;
}

}  // namespace

TEST(FormatDouble, RoundTripsExactly) {
  Rng rng = make_stream(3, 0);
  for (int i = 0; i < 2000; ++i) {
    const double v = normal(rng, 0.0, 1e3) * std::pow(10.0, static_cast<double>(uniform_index(rng, 20)) - 10.0);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(3.0), "3");
}

TEST(TableText, RoundTripAndHeader) {
  const auto t = small_table();
  std::stringstream buf;
  write_feature_table(buf, t);
  const std::string text = buf.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "pair_id,distance_m,label,f.a,f.b,f.c");
  const auto back = read_feature_table(buf, "mem");
  EXPECT_EQ(back.names, t.names);
  ASSERT_EQ(back.rows.size(), 2u);
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_EQ(back.rows[r].pair_id, t.rows[r].pair_id);
    EXPECT_EQ(back.rows[r].distance_m, t.rows[r].distance_m);
    EXPECT_EQ(back.rows[r].label, t.rows[r].label);
    EXPECT_EQ(back.rows[r].values, t.rows[r].values);
  }
}

TEST(TableText, RejectsBadCells) {
  std::stringstream short_row("pair_id,distance_m,label,f\nx|y,1,Close\n");
  EXPECT_THROW(read_feature_table(short_row, "mem"), validation_error);
  std::stringstream bad_label("pair_id,distance_m,label,f\nx|y,1,Near,0\n");
  EXPECT_THROW(read_feature_table(bad_label, "mem"), validation_error);
  std::stringstream bad_value("pair_id,distance_m,label,f\nx|y,1,Close,abc\n");
  EXPECT_THROW(read_feature_table(bad_value, "mem"), validation_error);
  std::stringstream bad_header("id,label\n");
  EXPECT_THROW(read_feature_table(bad_header, "mem"), validation_error);
  EXPECT_THROW(read_feature_table(std::filesystem::path("/nonexistent/table.csv")), io_error);
}

TEST(TableOps, ProjectSubsetAndColumns) {
  const auto t = small_table();
  const auto p = t.project({"f.c", "f.a"});
  EXPECT_EQ(p.names, (std::vector<std::string>{"f.c", "f.a"}));
  EXPECT_EQ(p.rows[1].values, (std::vector<double>{-0.0, 1.0 / 3.0}));
  EXPECT_THROW(t.project({"missing"}), config_error);
  const auto s = t.subset({false, true});
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0].pair_id, "x|z");
  const auto cols = t.columns();
  EXPECT_EQ(cols[1], (std::vector<double>{-3.0, 12345.678}));
  EXPECT_EQ(t.labels(), (std::vector<ProximityClass>{ProximityClass::Close, ProximityClass::Far}));
}

TEST(Featurize, ThreadCountDoesNotChangeRows) {
  Rng rng = make_stream(4, 0);
  std::vector<Fingerprint> fps;
  for (int i = 0; i < 30; ++i) {
    fixture::Spec s;
    s.id = "f" + std::to_string(i);
    s.x = uniform_real(rng, 0, 10);
    s.y = uniform_real(rng, 0, 4);
    auto fp = fixture::random_fingerprint(rng, s.id, 15, 10);
    FingerprintInfo info = fp.info();
    info.position = {s.x, s.y};
    fps.emplace_back(std::move(info), std::vector<Reading>(fp.readings().begin(), fp.readings().end()));
  }
  const auto pairs = enumerate_pairs(fps, {});
  const auto one = featurize(pairs, {}, 1);
  const auto four = featurize(pairs, {}, 4);
  ASSERT_EQ(one.rows.size(), pairs.size());
  EXPECT_EQ(one.names, feature_names());
  std::stringstream a, b;
  write_feature_table(a, one);
  write_feature_table(b, four);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(one.rows[0].pair_id, pairs[0].pair_id());
}
