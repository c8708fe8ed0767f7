#pragma once

#include <span>
#include <vector>

namespace wifiprox::stats {

// Similarity coefficients between equal-length vectors. Every function
// returns 0 for degenerate input: length < 2 (1 for cosine), a zero norm,
// or a zero variance. Results are clamped to [-1, 1].

double cosine_similarity(std::span<const double> x, std::span<const double> y);
double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rho: Pearson correlation of average (fractional) ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b (tie-corrected), O(n log n) via Knight's merge-sort count.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

struct RankCorrelations {
  double spearman = 0.0;
  double kendall = 0.0;
};

/// Both rank coefficients from one shared sort; spearman() and
/// kendall_tau_b() are thin wrappers over this.
RankCorrelations rank_correlations(std::span<const double> x, std::span<const double> y);

/// 1-based average ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);

struct Summary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double harmonic_mean = 0.0;  // 0 if any element is 0
  double sample_sd = 0.0;      // 0 for a single element
  double population_sd = 0.0;
};

/// Seven descriptive statistics; an empty vector yields all zeros.
Summary summarize(std::span<const double> x);

double median(std::span<const double> x);

}  // namespace wifiprox::stats
