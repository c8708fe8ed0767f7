#include "wifiprox/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wifiprox/errors.hpp"

namespace wifiprox {

namespace {

double ratio(std::size_t num, std::size_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void check_inputs(std::span<const double> scores, std::span<const ProximityClass> labels) {
  if (scores.empty()) throw validation_error("cannot evaluate an empty sample");
  if (scores.size() != labels.size()) throw validation_error("scores and labels differ in length");
}

}  // namespace

EvalReport evaluate_scores(std::span<const double> scores, std::span<const ProximityClass> labels, double threshold) {
  check_inputs(scores, labels);
  EvalReport r;
  r.threshold = threshold;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted_close = scores[i] >= threshold;
    if (labels[i] == ProximityClass::Close) {
      (predicted_close ? r.tp : r.fn)++;
    } else {
      (predicted_close ? r.fp : r.tn)++;
    }
  }
  r.tpr = ratio(r.tp, r.tp + r.fn);
  r.tnr = ratio(r.tn, r.tn + r.fp);
  r.balanced_accuracy = balanced_accuracy(r.tpr, r.tnr);
  return r;
}

EvalReport evaluate(const BaggedEnsemble& model, const FeatureTable& table, double threshold) {
  const auto scores = model.score_table(table);
  const auto labels = table.labels();
  auto report = evaluate_scores(scores, labels, threshold);
  const bool both = report.tp + report.fn > 0 && report.tn + report.fp > 0;
  if (both) report.pr_curve = pr_curve_from_scores(scores, labels, sweep_thresholds(scores));
  return report;
}

std::vector<double> sweep_thresholds(std::span<const double> scores, std::size_t max_points) {
  std::vector<double> t(scores.begin(), scores.end());
  t.push_back(0.0);
  t.push_back(1.0);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  if (max_points > 1 && t.size() > max_points) {
    std::vector<double> picked;
    picked.reserve(max_points);
    for (std::size_t i = 0; i < max_points; ++i) picked.push_back(t[i * (t.size() - 1) / (max_points - 1)]);
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    t = std::move(picked);
  }
  return t;
}

std::vector<PrPoint> pr_curve_from_scores(std::span<const double> scores, std::span<const ProximityClass> labels,
                                          std::span<const double> thresholds) {
  check_inputs(scores, labels);
  // Sort scores descending once; each threshold is then a prefix.
  std::vector<std::pair<double, bool>> ranked;
  ranked.reserve(scores.size());
  std::size_t positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool close = labels[i] == ProximityClass::Close;
    positives += close;
    ranked.emplace_back(scores[i], close);
  }
  if (positives == 0 || positives == scores.size()) {
    throw validation_error("a precision-recall curve needs both Close and Far samples");
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& l, const auto& r) { return l.first > r.first; });

  std::vector<double> sorted_thresholds(thresholds.begin(), thresholds.end());
  std::sort(sorted_thresholds.begin(), sorted_thresholds.end(), std::greater<>());

  std::vector<PrPoint> points;
  points.reserve(sorted_thresholds.size());
  std::size_t taken = 0, tp = 0;
  for (double t : sorted_thresholds) {
    while (taken < ranked.size() && ranked[taken].first >= t) tp += ranked[taken++].second;
    PrPoint p;
    p.threshold = t;
    p.tp = tp;
    p.fp = taken - tp;
    p.precision = taken == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(taken);
    p.recall = static_cast<double>(tp) / static_cast<double>(positives);
    points.push_back(p);
  }
  std::reverse(points.begin(), points.end());
  return points;
}

std::vector<PrPoint> pr_curve(const BaggedEnsemble& model, const FeatureTable& table, std::size_t n_thresholds) {
  const auto scores = model.score_table(table);
  const auto labels = table.labels();
  return pr_curve_from_scores(scores, labels, sweep_thresholds(scores, n_thresholds));
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::ordered_json doc;
  doc["threshold"] = r.threshold;
  doc["tp"] = r.tp;
  doc["tn"] = r.tn;
  doc["fp"] = r.fp;
  doc["fn"] = r.fn;
  doc["tpr"] = r.tpr;
  doc["tnr"] = r.tnr;
  doc["balanced_accuracy"] = r.balanced_accuracy;
  auto curve = nlohmann::ordered_json::array();
  for (const auto& p : r.pr_curve) {
    nlohmann::ordered_json point;
    point["threshold"] = p.threshold;
    point["precision"] = p.precision;
    point["recall"] = p.recall;
    curve.push_back(std::move(point));
  }
  doc["pr_curve"] = std::move(curve);
  return doc.dump(2) + "\n";
}

std::string report_to_text(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "threshold           %8.4f\n"
                "                    predicted Close  predicted Far\n"
                "actual Close        %15zu  %13zu\n"
                "actual Far          %15zu  %13zu\n"
                "true positive rate  %7.2f%%\n"
                "true negative rate  %7.2f%%\n"
                "balanced accuracy   %7.2f%%\n",
                r.threshold, r.tp, r.fn, r.fp, r.tn, 100.0 * r.tpr, 100.0 * r.tnr, 100.0 * r.balanced_accuracy);
  return buf;
}

void write_pr_points(std::ostream& out, const std::vector<PrPoint>& points) {
  out << "recall precision threshold\n";
  for (const auto& p : points) {
    out << format_double(p.recall) << ' ' << format_double(p.precision) << ' ' << format_double(p.threshold) << '\n';
  }
}

void write_pr_points(const std::filesystem::path& path, const std::vector<PrPoint>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path.string() + "'");
  write_pr_points(out, points);
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

}  // namespace wifiprox
