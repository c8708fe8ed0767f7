#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include "provenance.hpp"
#include "wifiprox/errors.hpp"
#include "wifiprox/feature_table.hpp"
#include "wifiprox/ingest.hpp"
#include "wifiprox/metrics.hpp"
#include "wifiprox/synth.hpp"

namespace wifiprox::cli {

using nlohmann::ordered_json;

namespace {

ordered_json pairing_json(const PairingConfig& p) {
  return {{"close_max_m", p.close_max_m},
          {"far_min_m", p.far_min_m},
          {"far_max_m", p.far_max_m},
          {"exclude_same_burst", p.exclude_same_burst}};
}

ordered_json sampling_json(const SamplingOptions& s) {
  return {{"n_close", s.n_close}, {"n_far", s.n_far}, {"seed", s.seed}};
}

void print_skips(const SkipReport& r) {
  std::cout << "rows read:        " << r.rows_read << '\n'
            << "records loaded:   " << r.records_loaded << '\n'
            << "skipped:          " << r.skipped() << '\n'
            << "  empty rows:     " << r.empty_rows << '\n'
            << "  malformed rows: " << r.malformed_rows << '\n'
            << "  short bursts:   " << r.short_bursts << '\n'
            << "oversized bursts: " << r.oversized_bursts << '\n';
}

ordered_json skips_json(const SkipReport& r) {
  return {{"rows_read", r.rows_read},           {"records_loaded", r.records_loaded},
          {"skipped", r.skipped()},             {"empty_rows", r.empty_rows},
          {"malformed_rows", r.malformed_rows}, {"short_bursts", r.short_bursts},
          {"oversized_bursts", r.oversized_bursts}};
}

void print_counts(const ClassCounts& c) {
  std::cout << "Close: " << c.close << '\n' << "Far:   " << c.far << '\n';
}

// Fingerprints the pairs refer to; sub-burst mode rebuilds the pseudo
// fingerprints deterministically from the raw scans.
LoadResult load_fingerprints(const fs::path& path, bool sub_bursts) {
  auto loaded = load_canonical(path);
  if (!sub_bursts) return loaded;
  auto pseudo = pseudo_fingerprints(loaded.fingerprints);
  pseudo.report.rows_read = loaded.report.rows_read;
  pseudo.report.empty_rows += loaded.report.empty_rows;
  return pseudo;
}

std::vector<std::string> read_name_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  std::vector<std::string> names;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) names.push_back(line);
  }
  if (names.empty()) throw validation_error(path.string() + ": feature list is empty");
  return names;
}

ClassCounts table_counts(const FeatureTable& t) {
  ClassCounts c;
  for (const auto& r : t.rows) (r.label == ProximityClass::Close ? c.close : c.far)++;
  return c;
}

}  // namespace

void run_synth(const SynthOptions& o) {
  auto cfg = density_preset(parse_density(o.density));
  cfg.seed = o.seed;
  if (o.positions) cfg.n_positions = *o.positions;
  if (o.scans) cfg.scans_per_burst = *o.scans;
  if (o.floors) cfg.floors = *o.floors;
  if (o.aps) cfg.n_aps = *o.aps;
  if (o.dataset_id) cfg.dataset_id = *o.dataset_id;

  Provenance prov("synth", {{"density", o.density},
                            {"seed", cfg.seed},
                            {"dataset_id", cfg.dataset_id},
                            {"positions", cfg.n_positions},
                            {"scans_per_burst", cfg.scans_per_burst},
                            {"floors", cfg.floors},
                            {"aps", cfg.n_aps}});
  prov.print_header(std::cout);
  const auto fps = generate_site(cfg);
  write_canonical(o.out, fps);
  prov.write_sidecar(o.out);

  std::vector<std::size_t> counts;
  counts.reserve(fps.size());
  for (const auto& fp : fps) counts.push_back(fp.ap_count());
  std::sort(counts.begin(), counts.end());
  std::cout << "fingerprints: " << fps.size() << '\n'
            << "median APs per scan: " << (counts.empty() ? 0 : counts[counts.size() / 2]) << '\n';
}

void run_ingest(const IngestOptions& o) {
  if (o.manifest.has_value() == o.canonical.has_value()) {
    throw config_error("ingest needs exactly one of --manifest or --canonical");
  }
  Provenance prov("ingest", ordered_json::object());
  LoadResult loaded;
  if (o.manifest) {
    const auto manifest = load_manifest(*o.manifest);
    prov.add_input("manifest", *o.manifest);
    prov.add_input("data", manifest.path);
    prov.print_header(std::cout);
    loaded = load_dataset(manifest);
  } else {
    prov.add_input("canonical", *o.canonical);
    prov.print_header(std::cout);
    loaded = load_canonical(*o.canonical);
  }
  write_canonical(o.out, loaded.fingerprints);
  prov.write_sidecar(o.out);

  auto report_path = o.out;
  report_path += ".skips.json";
  std::ofstream report(report_path, std::ios::binary);
  if (!report) throw io_error("cannot write '" + report_path.string() + "'");
  report << skips_json(loaded.report).dump(2) << '\n';
  print_skips(loaded.report);
}

void run_pairs(const PairsOptions& o) {
  o.pairing.validate();
  ordered_json config = pairing_json(o.pairing);
  config["sub_bursts"] = o.sub_bursts;
  if (o.sampling.active()) config["sampling"] = sampling_json(o.sampling);
  if (o.sampling.active()) config["seed"] = o.sampling.seed;
  Provenance prov("pairs", config);
  prov.add_input("fingerprints", o.fingerprints);
  prov.print_header(std::cout);

  const auto loaded = load_fingerprints(o.fingerprints, o.sub_bursts);
  if (o.sub_bursts) {
    std::cout << "pseudo-fingerprints: " << loaded.fingerprints.size() << '\n'
              << "short bursts: " << loaded.report.short_bursts << '\n';
  }
  auto pairs = enumerate_pairs(loaded.fingerprints, o.pairing);
  if (o.sampling.active()) {
    auto split = sample_training_set(pairs, o.sampling.n_close, o.sampling.n_far, o.sampling.seed);
    if (o.sampling.remainder_out) {
      write_pairs(*o.sampling.remainder_out, split.remainder);
      prov.write_sidecar(*o.sampling.remainder_out);
    }
    pairs = std::move(split.train);
  }
  write_pairs(o.out, pairs);
  prov.write_sidecar(o.out);
  print_counts(count_labels(pairs));
}

void run_featurize(const FeaturizeOptions& o) {
  Provenance prov("featurize", {{"sub_bursts", o.sub_bursts}});
  prov.add_input("fingerprints", o.fingerprints);
  prov.add_input("pairs", o.pairs);
  prov.print_header(std::cout);

  const auto loaded = load_fingerprints(o.fingerprints, o.sub_bursts);
  const auto pairs = read_pairs(o.pairs, loaded.fingerprints);
  const auto table = featurize(pairs, {}, o.threads);
  write_feature_table(o.out, table);
  prov.write_sidecar(o.out);
  std::cout << "rows: " << table.rows.size() << '\n' << "features: " << table.names.size() << '\n';
}

void run_train(const TrainOptions& o) {
  if (o.features.empty()) throw config_error("train needs at least one --features table");
  o.ensemble.validate();
  ordered_json config{{"seed", o.ensemble.seed},
                      {"trees", o.ensemble.n_estimators},
                      {"max_features", o.ensemble.max_features},
                      {"bootstrap", o.ensemble.bootstrap},
                      {"sampling", sampling_json(o.sampling)}};
  Provenance prov("train", config);
  for (const auto& f : o.features) prov.add_input("features", f);
  if (o.feature_list) prov.add_input("feature_list", *o.feature_list);
  prov.print_header(std::cout);

  // Sampling applies to each table separately so that every source
  // contributes the same number of pairs per class.
  FeatureTable train, remainder;
  for (std::size_t i = 0; i < o.features.size(); ++i) {
    auto table = read_feature_table(o.features[i]);
    if (i == 0) {
      train.names = table.names;
      remainder.names = table.names;
    } else if (table.names != train.names) {
      table = table.project(train.names);
    }
    if (o.sampling.active()) {
      const auto keep = sample_by_class(table.labels(), o.sampling.n_close, o.sampling.n_far, o.sampling.seed + i);
      std::vector<bool> rest(keep.size());
      std::transform(keep.begin(), keep.end(), rest.begin(), [](bool k) { return !k; });
      auto left_over = table.subset(rest);
      remainder.rows.insert(remainder.rows.end(), std::make_move_iterator(left_over.rows.begin()),
                            std::make_move_iterator(left_over.rows.end()));
      table = table.subset(keep);
    }
    train.rows.insert(train.rows.end(), std::make_move_iterator(table.rows.begin()),
                      std::make_move_iterator(table.rows.end()));
  }
  if (o.feature_list) {
    const auto names = read_name_list(*o.feature_list);
    train = train.project(names);
    remainder = remainder.project(names);
  }

  const auto model = train_ensemble(train, o.ensemble);
  save_model(o.out, model);
  prov.write_sidecar(o.out);
  if (o.sampling.remainder_out) {
    write_feature_table(*o.sampling.remainder_out, remainder);
    prov.write_sidecar(*o.sampling.remainder_out);
  }

  double depth = 0.0, leaves = 0.0;
  for (const auto& e : model.estimators) {
    depth += static_cast<double>(e.tree.depth());
    leaves += static_cast<double>(e.tree.leaf_count());
  }
  const double n = static_cast<double>(model.estimators.size());
  std::cout << "training rows: " << train.rows.size() << " (Close " << model.class_balance.close << ", Far "
            << model.class_balance.far << ")\n"
            << "features: " << model.feature_names.size() << '\n'
            << "trees: " << model.estimators.size() << '\n'
            << "mean depth: " << format_double(depth / n) << '\n'
            << "mean leaves: " << format_double(leaves / n) << '\n';
  if (o.sampling.remainder_out) std::cout << "remainder rows: " << remainder.rows.size() << '\n';
}

void run_select(const SelectOptions& o) {
  MrmrConfig cfg = o.mrmr;
  if (o.discretization == "mean-sd") {
    cfg.method = Discretization::mean_pm_sigma;
  } else if (o.discretization == "equal-frequency") {
    cfg.method = Discretization::equal_frequency;
  } else {
    throw config_error("unknown discretization '" + o.discretization + "' (expected mean-sd or equal-frequency)");
  }
  cfg.validate();
  Provenance prov("select", {{"top_k", cfg.k},
                             {"discretization", o.discretization},
                             {"alpha", cfg.alpha},
                             {"bins", cfg.bins}});
  prov.add_input("features", o.features);
  prov.print_header(std::cout);

  const auto table = read_feature_table(o.features);
  const auto steps = mrmr_rank(table.columns(), table.names, table.labels(), cfg);
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw io_error("cannot write '" + o.out.string() + "'");
  for (const auto& s : steps) out << s.name << '\n';
  out.close();
  if (!out) throw io_error("write failed for '" + o.out.string() + "'");
  prov.write_sidecar(o.out);

  std::cout << "rank  relevance   score       feature\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    char line[64];
    std::snprintf(line, sizeof line, "%4zu  %-10.6f  %-10.6f  ", i + 1, steps[i].relevance, steps[i].score);
    std::cout << line << steps[i].name << '\n';
  }
}

void run_evaluate(const EvaluateOptions& o) {
  Provenance prov("evaluate", {{"threshold", o.threshold}});
  prov.add_input("model", o.model);
  prov.add_input("features", o.features);
  prov.print_header(std::cout);

  const auto model = load_model(o.model);
  const auto table = read_feature_table(o.features);
  const auto report = evaluate(model, table, o.threshold);
  {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw io_error("cannot write '" + o.out.string() + "'");
    out << report_to_json(report);
    if (!out) throw io_error("write failed for '" + o.out.string() + "'");
  }
  prov.write_sidecar(o.out);
  const auto text = report_to_text(report);
  if (o.text_out) {
    std::ofstream out(*o.text_out, std::ios::binary);
    if (!out) throw io_error("cannot write '" + o.text_out->string() + "'");
    out << text;
  }
  std::cout << text;
}

void run_pr_curve(const PrCurveOptions& o) {
  ordered_json config{{"n_thresholds", o.n_thresholds}, {"balance", o.balance}};
  if (o.balance) config["seed"] = o.seed;
  Provenance prov("pr-curve", config);
  prov.add_input("model", o.model);
  prov.add_input("features", o.features);
  prov.print_header(std::cout);

  const auto model = load_model(o.model);
  auto table = read_feature_table(o.features);
  if (o.balance) {
    const auto c = table_counts(table);
    const std::size_t n = std::min(c.close, c.far);
    table = table.subset(sample_by_class(table.labels(), n, n, o.seed));
  }
  const auto points = pr_curve(model, table, o.n_thresholds);
  write_pr_points(o.out, points);
  prov.write_sidecar(o.out);
  const auto c = table_counts(table);
  std::cout << "samples: " << table.rows.size() << " (Close " << c.close << ", Far " << c.far << ")\n"
            << "points: " << points.size() << '\n';
}

}  // namespace wifiprox::cli
