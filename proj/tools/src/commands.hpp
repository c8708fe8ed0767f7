#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wifiprox/model.hpp"
#include "wifiprox/pairing.hpp"
#include "wifiprox/selection.hpp"

namespace wifiprox::cli {

namespace fs = std::filesystem;

struct SynthOptions {
  std::string density = "medium";
  std::uint64_t seed = 0;
  std::optional<std::size_t> positions;
  std::optional<std::size_t> scans;
  std::optional<std::size_t> floors;
  std::optional<std::size_t> aps;
  std::optional<std::string> dataset_id;
  fs::path out;
};

struct IngestOptions {
  std::optional<fs::path> manifest;
  std::optional<fs::path> canonical;
  fs::path out;
};

/// Class-balanced sampling shared by `pairs` and `train`. Zero for both
/// counts keeps everything.
struct SamplingOptions {
  std::size_t n_close = 0;
  std::size_t n_far = 0;
  std::uint64_t seed = 0;
  std::optional<fs::path> remainder_out;

  bool active() const noexcept { return n_close > 0 || n_far > 0; }
};

struct PairsOptions {
  fs::path fingerprints;
  PairingConfig pairing;
  bool sub_bursts = false;
  SamplingOptions sampling;
  fs::path out;
};

struct FeaturizeOptions {
  fs::path fingerprints;
  fs::path pairs;
  bool sub_bursts = false;
  unsigned threads = 0;
  fs::path out;
};

struct TrainOptions {
  std::vector<fs::path> features;
  std::optional<fs::path> feature_list;
  SamplingOptions sampling;
  EnsembleConfig ensemble;
  fs::path out;
};

struct SelectOptions {
  fs::path features;
  MrmrConfig mrmr;
  std::string discretization = "mean-sd";
  fs::path out;
};

struct EvaluateOptions {
  fs::path model;
  fs::path features;
  double threshold = 0.5;
  std::optional<fs::path> text_out;
  fs::path out;
};

struct PrCurveOptions {
  fs::path model;
  fs::path features;
  std::size_t n_thresholds = 0;
  bool balance = false;
  std::uint64_t seed = 0;
  fs::path out;
};

void run_synth(const SynthOptions& o);
void run_ingest(const IngestOptions& o);
void run_pairs(const PairsOptions& o);
void run_featurize(const FeaturizeOptions& o);
void run_train(const TrainOptions& o);
void run_select(const SelectOptions& o);
void run_evaluate(const EvaluateOptions& o);
void run_pr_curve(const PrCurveOptions& o);

}  // namespace wifiprox::cli
