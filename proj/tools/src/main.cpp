#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "wifiprox/errors.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUnexpected = 1, kIo = 2, kValidation = 3, kConfig = 4 };

using namespace wifiprox;
using namespace wifiprox::cli;

void add_pairing_flags(CLI::App& cmd, PairingConfig& p) {
  cmd.add_option("--close-max-m", p.close_max_m, "Upper bound of the Close band (m)")->capture_default_str();
  cmd.add_option("--far-min-m", p.far_min_m, "Lower bound of the Far band (m)")->capture_default_str();
  cmd.add_option("--far-max-m", p.far_max_m, "Upper bound of the Far band (m)")->capture_default_str();
  cmd.add_flag("--exclude-same-burst", p.exclude_same_burst, "Drop pairs whose scans share a burst");
}

void add_sampling_flags(CLI::App& cmd, SamplingOptions& s) {
  cmd.add_option("--n-close", s.n_close, "Close samples to draw (0 with --n-far 0 keeps all)");
  cmd.add_option("--n-far", s.n_far, "Far samples to draw");
  cmd.add_option("--seed", s.seed, "Sampling seed")->capture_default_str();
  cmd.add_option("--remainder-out", s.remainder_out, "Write the samples not drawn here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wi-Fi fingerprint proximity classification toolkit"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic survey site");
  synth_cmd->add_option("--density", synth.density, "low, medium or high")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--positions", synth.positions, "Survey positions per floor");
  synth_cmd->add_option("--scans", synth.scans, "Scans per burst");
  synth_cmd->add_option("--floors", synth.floors, "Number of floors");
  synth_cmd->add_option("--aps", synth.aps, "Access points per floor");
  synth_cmd->add_option("--dataset-id", synth.dataset_id, "Dataset identifier");
  synth_cmd->add_option("-o,--out", synth.out, "Canonical fingerprint file")->required();

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Load a dataset into canonical fingerprint records");
  ingest_cmd->add_option("--manifest", ingest.manifest, "Dataset manifest (key = value)");
  ingest_cmd->add_option("--canonical", ingest.canonical, "Canonical fingerprint file");
  ingest_cmd->add_option("-o,--out", ingest.out, "Canonical fingerprint file")->required();

  PairsOptions pairs;
  auto* pairs_cmd = app.add_subcommand("pairs", "Enumerate and label fingerprint pairs");
  pairs_cmd->add_option("--fingerprints", pairs.fingerprints, "Canonical fingerprint file")->required();
  pairs_cmd->add_flag("--sub-bursts", pairs.sub_bursts, "Pair pseudo-fingerprints built from 9-scan bursts");
  add_pairing_flags(*pairs_cmd, pairs.pairing);
  add_sampling_flags(*pairs_cmd, pairs.sampling);
  pairs_cmd->add_option("-o,--out", pairs.out, "Pairs file")->required();

  FeaturizeOptions featurize;
  auto* featurize_cmd = app.add_subcommand("featurize", "Compute the feature table for labelled pairs");
  featurize_cmd->add_option("--fingerprints", featurize.fingerprints, "Canonical fingerprint file")->required();
  featurize_cmd->add_option("--pairs", featurize.pairs, "Pairs file")->required();
  featurize_cmd->add_flag("--sub-bursts", featurize.sub_bursts, "Pairs refer to pseudo-fingerprints");
  featurize_cmd->add_option("--threads", featurize.threads, "Worker threads (0 = all cores)");
  featurize_cmd->add_option("-o,--out", featurize.out, "Feature table")->required();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a bagged decision-tree ensemble");
  train_cmd->add_option("--features", train.features, "Feature table (repeatable; sampling is per table)")
      ->required();
  train_cmd->add_option("--feature-list", train.feature_list, "Restrict to the features listed in this file");
  add_sampling_flags(*train_cmd, train.sampling);
  train_cmd->add_option("--trees", train.ensemble.n_estimators, "Number of trees")->capture_default_str();
  train_cmd->add_option("--max-features", train.ensemble.max_features, "Features drawn per tree")
      ->capture_default_str();
  train_cmd->add_flag("!--no-bootstrap", train.ensemble.bootstrap, "Train every tree on all rows");
  train_cmd->add_option("--threads", train.ensemble.threads, "Worker threads (0 = all cores)");
  train_cmd->add_option("-o,--out", train.out, "Model file")->required();
  train_cmd->callback([&] { train.ensemble.seed = train.sampling.seed; });

  SelectOptions select;
  auto* select_cmd = app.add_subcommand("select", "Rank features by mRMR (MID)");
  select_cmd->add_option("--features", select.features, "Feature table")->required();
  select_cmd->add_option("--top-k", select.mrmr.k, "Number of features to keep")->capture_default_str();
  select_cmd->add_option("--discretization", select.discretization, "mean-sd or equal-frequency")
      ->capture_default_str();
  select_cmd->add_option("--alpha", select.mrmr.alpha, "Width of the middle state in standard deviations")
      ->capture_default_str();
  select_cmd->add_option("--bins", select.mrmr.bins, "Bins for equal-frequency discretization")
      ->capture_default_str();
  select_cmd->add_option("-o,--out", select.out, "Ranked feature list")->required();

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Confusion counts and balanced accuracy");
  evaluate_cmd->add_option("--model", evaluate.model, "Model file")->required();
  evaluate_cmd->add_option("--features", evaluate.features, "Feature table")->required();
  evaluate_cmd->add_option("--threshold", evaluate.threshold, "Close iff score >= threshold")
      ->capture_default_str();
  evaluate_cmd->add_option("--text-out", evaluate.text_out, "Also write the aligned text report here");
  evaluate_cmd->add_option("-o,--out", evaluate.out, "JSON report")->required();

  PrCurveOptions pr;
  auto* pr_cmd = app.add_subcommand("pr-curve", "Precision-recall points over score thresholds");
  pr_cmd->add_option("--model", pr.model, "Model file")->required();
  pr_cmd->add_option("--features", pr.features, "Feature table")->required();
  pr_cmd->add_option("--n-thresholds", pr.n_thresholds, "Subsample the threshold sweep (0 = all)");
  pr_cmd->add_flag("--balance", pr.balance, "Subsample to equal class counts first");
  pr_cmd->add_option("--seed", pr.seed, "Seed for --balance")->capture_default_str();
  pr_cmd->add_option("-o,--out", pr.out, "Points file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*synth_cmd) run_synth(synth);
    if (*ingest_cmd) run_ingest(ingest);
    if (*pairs_cmd) run_pairs(pairs);
    if (*featurize_cmd) run_featurize(featurize);
    if (*train_cmd) run_train(train);
    if (*select_cmd) run_select(select);
    if (*evaluate_cmd) run_evaluate(evaluate);
    if (*pr_cmd) run_pr_curve(pr);
  } catch (const io_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const validation_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUnexpected;
  }
  return kOk;
}
