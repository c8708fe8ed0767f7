#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "wifiprox/errors.hpp"
#include "wifiprox/ingest.hpp"

using namespace wifiprox;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("wifiprox_ingest_" + std::to_string(::getpid()) + "_" +
                                                 std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

  fs::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

Fingerprint scan(const std::string& burst, int index, const std::vector<std::pair<std::uint64_t, double>>& r) {
  fixture::Spec s;
  s.id = burst + "-" + std::to_string(index);
  s.burst = burst;
  s.scan = index;
  s.x = 1.5;
  s.y = 2.5;
  return fixture::make(s, r);
}

}  // namespace

TEST(Canonical, RoundTripPreservesRecords) {
  fixture::Spec s;
  s.id = "r1";
  s.x = 1.25;
  s.y = -3.5;
  s.device = "Pixel 3";
  s.burst = "b7";
  s.scan = 4;
  const std::vector<Fingerprint> fps{fixture::make(s, {{1, -40.5}, {300, -77}}), fixture::make("r2", {{2, -60}})};
  std::stringstream buf;
  write_canonical(buf, fps);
  const auto loaded = parse_canonical(buf, "mem");
  ASSERT_EQ(loaded.fingerprints.size(), 2u);
  EXPECT_EQ(loaded.fingerprints[0], fps[0]);
  EXPECT_EQ(loaded.fingerprints[1], fps[1]);
  EXPECT_EQ(loaded.report.rows_read, 2u);
  EXPECT_EQ(loaded.report.skipped(), 0u);
}

TEST(Canonical, LineFormatIsStable) {
  const auto fp = fixture::make("r1", {{2, -60}});
  EXPECT_EQ(to_canonical_line(fp),
            R"({"id":"r1","dataset":"test","building":"0","floor":"0","x_m":0.0,"y_m":0.0,"device":"phone",)"
            R"("burst":null,"scan":null,"aps":[{"bssid":"00:00:00:00:00:02","rssi":-60.0}]})");
}

TEST(Canonical, EmptyRecordsAreCountedNotLoaded) {
  std::stringstream in;
  in << R"({"id":"a","dataset":"d","building":"0","floor":"0","x_m":0,"y_m":0,"device":"p","aps":[]})" << "\n\n"
     << R"({"id":"b","dataset":"d","building":"0","floor":"0","x_m":0,"y_m":0,"device":"p","aps":[{"bssid":"00:00:00:00:00:01","rssi":-50}]})"
     << "\n";
  const auto loaded = parse_canonical(in, "mem");
  EXPECT_EQ(loaded.fingerprints.size(), 1u);
  EXPECT_EQ(loaded.report.empty_rows, 1u);
  EXPECT_EQ(loaded.report.rows_read, 2u);
}

TEST(Canonical, ErrorsNameTheLine) {
  std::stringstream in;
  in << R"({"id":"a","dataset":"d","building":"0","floor":"0","x_m":0,"y_m":0,"device":"p","aps":[]})" << "\n"
     << "{not json\n";
  try {
    parse_canonical(in, "file.jsonl");
    FAIL() << "expected validation_error";
  } catch (const validation_error& e) {
    EXPECT_NE(std::string(e.what()).find("file.jsonl:2"), std::string::npos) << e.what();
  }
  std::stringstream dup;
  dup << R"({"id":"a","dataset":"d","building":"0","floor":"0","x_m":0,"y_m":0,"device":"p","aps":[{"bssid":"00:00:00:00:00:01","rssi":-50},{"bssid":"0:0:0:0:0:1","rssi":-51}]})"
      << "\n";
  EXPECT_THROW(parse_canonical(dup, "mem"), validation_error);
}

TEST(Canonical, MissingFileIsIoError) {
  EXPECT_THROW(load_canonical("/nonexistent/wifiprox/file.jsonl"), io_error);
}

TEST(WideCsv, TenRowsTwoEmpty) {
  TempDir dir;
  std::string csv = "WAP001,WAP002,WAP003,LONGITUDE,LATITUDE,FLOOR,BUILDINGID\n";
  for (int i = 0; i < 10; ++i) {
    if (i == 3 || i == 7) {
      csv += "100,100,100," + std::to_string(i) + ",0,1,0\n";
    } else {
      csv += "-" + std::to_string(40 + i) + ",100,-70," + std::to_string(i) + ",0,1,0\n";
    }
  }
  dir.write("data.csv", csv);
  const auto manifest_path = dir.write("m.manifest",
                                       "# UJIIndoorLoc-style export\n"
                                       "dataset_id = uji\nformat = wide_csv\npath = data.csv\n"
                                       "floor_column = FLOOR\nbuilding_column = BUILDINGID\n");
  const auto manifest = load_manifest(manifest_path);
  const auto loaded = load_dataset(manifest);
  EXPECT_EQ(loaded.fingerprints.size(), 8u);
  EXPECT_EQ(loaded.report.skipped(), 2u);
  EXPECT_EQ(loaded.report.empty_rows, 2u);
  const auto& first = loaded.fingerprints.front();
  EXPECT_EQ(first.id(), "uji:1");
  EXPECT_EQ(first.floor_key().floor, "1");
  EXPECT_EQ(first.ap_count(), 2u);
  EXPECT_EQ(first.rssi(ApId::from_index(1)), -40.0);
  EXPECT_EQ(first.rssi(ApId::from_index(3)), -70.0);
  EXPECT_EQ(loaded.fingerprints[3].id(), "uji:5");
}

TEST(WideCsv, MalformedRowsAreCountedAndBadCellsThrow) {
  TempDir dir;
  dir.write("d.csv", "WAP1,WAP2,X,Y\n-50,100,1,2\n-50,1,2\n-60,-61,3,4\n");
  const auto manifest = load_manifest(dir.write("m", "dataset_id=d\nformat=wide_csv\npath=d.csv\nx_column=X\n"
                                                     "y_column=Y\ncoordinate_scale=0.5\n"));
  const auto loaded = load_dataset(manifest);
  EXPECT_EQ(loaded.fingerprints.size(), 2u);
  EXPECT_EQ(loaded.report.malformed_rows, 1u);
  EXPECT_DOUBLE_EQ(loaded.fingerprints[1].position().x_m, 1.5);

  dir.write("bad.csv", "WAP1,X,Y\nabc,1,2\n");
  const auto bad = load_manifest(dir.write("m2", "dataset_id=d\nformat=wide_csv\npath=bad.csv\nx_column=X\n"
                                                 "y_column=Y\n"));
  EXPECT_THROW(load_dataset(bad), validation_error);
}

TEST(Manifest, RejectsUnknownKeysAndMissingData) {
  TempDir dir;
  dir.write("d.csv", "WAP1,LONGITUDE,LATITUDE\n-50,0,0\n");
  EXPECT_THROW(load_manifest(dir.write("a", "dataset_id=d\nformat=wide_csv\npath=d.csv\ncolour=red\n")),
               config_error);
  EXPECT_THROW(load_manifest(dir.write("b", "dataset_id=d\nformat=wide_csv\n")), config_error);
  EXPECT_THROW(load_manifest(dir.write("c", "dataset_id=d\nformat=parquet\npath=d.csv\n")), config_error);
  EXPECT_THROW(load_manifest(dir.write("e", "dataset_id=d\nformat=wide_csv\npath=missing.csv\n")), io_error);
  EXPECT_THROW(load_manifest(dir.path() / "no-such-manifest"), io_error);
}

TEST(Bursts, GroupsAndValidatesScanOrder) {
  std::vector<Fingerprint> fps{scan("b", 1, {{1, -50}}), scan("b", 0, {{1, -51}}), scan("c", 0, {{1, -52}})};
  const auto bursts = group_bursts(fps);
  ASSERT_EQ(bursts.size(), 2u);
  EXPECT_EQ(bursts[0].burst_id, "b");
  EXPECT_EQ(bursts[0].scans[0].id(), "b-0");

  std::vector<Fingerprint> gap{scan("b", 0, {{1, -50}}), scan("b", 2, {{1, -50}})};
  EXPECT_THROW(group_bursts(gap), validation_error);
  std::vector<Fingerprint> loose{fixture::make("x", {{1, -50}})};
  EXPECT_THROW(group_bursts(loose), validation_error);
}

TEST(SubBursts, MediansOfEachHalfAndNinthScanIgnored) {
  // AP 1 seen in every scan, AP 2 only in the first half (3 of 4 scans),
  // AP 3 only in scan 8.
  const std::vector<double> ap1{-50, -40, -60, -45, -70, -72, -71, -90, -10};
  std::vector<Fingerprint> fps;
  for (int i = 0; i < 9; ++i) {
    std::vector<std::pair<std::uint64_t, double>> r{{1, ap1[static_cast<std::size_t>(i)]}};
    if (i == 0) r.emplace_back(2, -80);
    if (i == 1) r.emplace_back(2, -82);
    if (i == 3) r.emplace_back(2, -81);
    if (i == 8) r.emplace_back(3, -30);
    fps.push_back(scan("b", i, r));
  }
  const auto bursts = group_bursts(fps);
  const auto halves = split_sub_bursts(bursts.at(0));
  ASSERT_TRUE(halves.has_value());
  const auto& first = halves->first.fingerprint;
  const auto& second = halves->second.fingerprint;
  EXPECT_EQ(first.rssi(ApId::from_index(1)), (-50.0 + -45.0) / 2.0);  // sorted -60 -50 -45 -40
  EXPECT_EQ(first.rssi(ApId::from_index(2)), -81.0);
  EXPECT_EQ(second.rssi(ApId::from_index(1)), (-72.0 + -71.0) / 2.0);  // sorted -90 -72 -71 -70
  EXPECT_FALSE(second.rssi(ApId::from_index(2)).has_value());
  EXPECT_FALSE(first.rssi(ApId::from_index(3)).has_value());
  EXPECT_FALSE(second.rssi(ApId::from_index(3)).has_value());
  EXPECT_EQ(halves->first.source_scan_ids, (std::vector<std::string>{"b-0", "b-1", "b-2", "b-3"}));
  EXPECT_EQ(halves->second.source_scan_ids, (std::vector<std::string>{"b-4", "b-5", "b-6", "b-7"}));
  EXPECT_EQ(first.position(), fps[0].position());
  EXPECT_EQ(first.burst_id(), std::optional<std::string>("b"));
  EXPECT_FALSE(first.scan_index().has_value());
  EXPECT_NE(first.id(), second.id());
}

TEST(SubBursts, ShortAndOversizedBurstsAreReported) {
  std::vector<Fingerprint> fps;
  for (int i = 0; i < 7; ++i) fps.push_back(scan("short", i, {{1, -50}}));
  for (int i = 0; i < 11; ++i) fps.push_back(scan("long", i, {{1, -50.0 - i}}));
  for (int i = 0; i < 8; ++i) fps.push_back(scan("exact", i, {{1, -50}}));
  const auto result = pseudo_fingerprints(fps);
  EXPECT_EQ(result.fingerprints.size(), 4u);
  EXPECT_EQ(result.report.short_bursts, 1u);
  EXPECT_EQ(result.report.oversized_bursts, 1u);
  EXPECT_EQ(result.report.rows_read, 3u);
}
