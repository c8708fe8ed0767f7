#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wifiprox/feature_table.hpp"
#include "wifiprox/types.hpp"

namespace wifiprox {

enum class Discretization {
  mean_pm_sigma,   // three states split at mean - alpha*sd and mean + alpha*sd
  equal_frequency  // `bins` states holding roughly equal numbers of samples
};

struct MrmrConfig {
  std::size_t k = 7;
  Discretization method = Discretization::mean_pm_sigma;
  double alpha = 1.0;
  std::size_t bins = 3;
  unsigned threads = 0;

  void validate() const;
};

/// Maps each value to a small state index 0..S-1.
///
/// A column with at most three distinct values is treated as categorical:
/// each distinct value becomes its own state (ascending). Thresholding a
/// binary column at mean +/- sd would otherwise merge both values into one
/// state whenever the classes are balanced.
std::vector<int> discretize(std::span<const double> values, const MrmrConfig& cfg);

/// Plug-in estimate in bits from the empirical joint distribution of two
/// state vectors of equal length. Zero-count cells contribute nothing.
double mutual_information(std::span<const int> x, std::span<const int> y);

struct MrmrStep {
  std::string name;
  double relevance = 0.0;   // I(feature; label)
  double redundancy = 0.0;  // mean I(feature; s) over previously selected s
  double score = 0.0;       // relevance - redundancy
};

/// Greedy MID ordering. The first pick maximises relevance alone; ties go to
/// the lexicographically smaller name. k is clamped to the column count.
/// Throws validation_error for fewer than two features, mismatched lengths,
/// or a label column holding a single class.
std::vector<MrmrStep> mrmr_rank(const std::vector<std::vector<double>>& columns,
                                const std::vector<std::string>& names, std::span<const ProximityClass> labels,
                                const MrmrConfig& cfg);

std::vector<std::string> mrmr_select(const FeatureTable& table, const MrmrConfig& cfg);

}  // namespace wifiprox
