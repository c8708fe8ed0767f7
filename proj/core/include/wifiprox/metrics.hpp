#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wifiprox/feature_table.hpp"
#include "wifiprox/model.hpp"

namespace wifiprox {

struct PrPoint {
  double threshold = 0.0;
  double precision = 1.0;  // 1 when nothing is predicted Close
  double recall = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
};

/// Confusion counts and rates with Close as the positive class. A rate whose
/// denominator is zero (no samples of that class) is reported as 0.
struct EvalReport {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double tpr = 0.0;
  double tnr = 0.0;
  double balanced_accuracy = 0.0;
  double threshold = 0.5;
  std::vector<PrPoint> pr_curve;
};

inline double balanced_accuracy(double tpr, double tnr) noexcept { return (tpr + tnr) / 2.0; }

/// Throws validation_error on empty or mismatched input.
EvalReport evaluate_scores(std::span<const double> scores, std::span<const ProximityClass> labels, double threshold);
EvalReport evaluate(const BaggedEnsemble& model, const FeatureTable& table, double threshold = 0.5);

/// Candidate thresholds: 0, 1 and every distinct score, ascending. When
/// max_points > 1 and there are more candidates, an evenly spaced subset
/// (keeping both ends) is returned.
std::vector<double> sweep_thresholds(std::span<const double> scores, std::size_t max_points = 0);

/// One point per threshold; Close predicted iff score >= threshold.
/// Throws validation_error unless both classes are present.
std::vector<PrPoint> pr_curve_from_scores(std::span<const double> scores, std::span<const ProximityClass> labels,
                                          std::span<const double> thresholds);
std::vector<PrPoint> pr_curve(const BaggedEnsemble& model, const FeatureTable& table, std::size_t n_thresholds = 0);

/// Machine-readable report (JSON) and an aligned text summary.
std::string report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

/// Plot-ready points: header "recall precision threshold", one point per line.
void write_pr_points(std::ostream& out, const std::vector<PrPoint>& points);
void write_pr_points(const std::filesystem::path& path, const std::vector<PrPoint>& points);

}  // namespace wifiprox
