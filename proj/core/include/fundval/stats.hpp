#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fundval/feature_matrix.hpp"

namespace fundval::stats {

struct ColumnSummary {
    std::string name;
    std::size_t count = 0;
    std::optional<double> mean;  // unset when fewer than 2 values
    std::optional<double> std;   // sample standard deviation (n-1)
    bool operator==(const ColumnSummary&) const = default;
};

std::vector<ColumnSummary> summary_stats(const FeatureMatrix& fm);

struct ZScoreResult {
    FeatureMatrix real_z;
    FeatureMatrix other_z;
    /// Columns whose real std is 0 (or undefined): centred only.
    std::vector<std::string> flagged_columns;
};

/// Standardizes both tables with the real table's column mean and std.
ZScoreResult zscore_normalize(const FeatureMatrix& real, const FeatureMatrix& other);

/// |mean(a) - mean(b)|.
double mean_difference(std::span<const double> a, std::span<const double> b);

/// Monte Carlo permutation test on the absolute mean difference with the
/// add-one estimate (1 + #{T_perm >= T_obs}) / (M + 1). The pooled sample is
/// put in canonical (sorted) order before shuffling, so the result does not
/// depend on which group is passed first.
double permutation_pvalue(std::span<const double> a, std::span<const double> b, int n_permutations,
                          std::uint64_t seed);

/// Exact p-value over every split of the pooled sample into groups of the
/// original sizes: #{T_split >= T_obs} / C(n_a + n_b, n_a). Limited to
/// 10^6 splits.
double exhaustive_permutation_pvalue(std::span<const double> a, std::span<const double> b);

struct FeatureTestResult {
    std::string name;
    std::optional<double> real_mean;
    std::optional<double> real_std;
    std::optional<double> synth_mean;
    std::optional<double> synth_std;
    std::optional<double> p_value;  // unset if the column has too few values
    bool match = false;
    bool operator==(const FeatureTestResult&) const = default;
};

struct PermutationReport {
    std::vector<FeatureTestResult> features;
    double threshold = 0.05;
    int n_permutations = 10000;
    std::uint64_t seed = 0;
    int match_count = 0;
    bool operator==(const PermutationReport&) const = default;
};

inline constexpr double kDefaultMatchThreshold = 0.05;
inline constexpr int kDefaultPermutations = 10000;

/// z-scores both tables against real, then tests each feature with seed
/// (seed + column index); match means p > threshold.
PermutationReport distribution_match_report(const FeatureMatrix& real, const FeatureMatrix& synth,
                                            double threshold = kDefaultMatchThreshold,
                                            int n_permutations = kDefaultPermutations,
                                            std::uint64_t seed = 0);

/// "<model>: N high p-values".
std::string format_match_summary(const std::string& model, const PermutationReport& report);

/// Uniform integer in [0, bound) by rejection from a 64-bit engine.
std::uint64_t uniform_below(std::uint64_t bound, std::uint64_t& state);

}  // namespace fundval::stats
