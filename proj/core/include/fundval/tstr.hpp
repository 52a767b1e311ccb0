#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fundval/feature_matrix.hpp"
#include "fundval/regression.hpp"

namespace fundval::stats {

enum class TargetKind { Continuous, Binary };

struct TargetSpec {
    std::string name;
    TargetKind kind = TargetKind::Continuous;
};

/// Parses "age:cont,sex:bin".
std::vector<TargetSpec> parse_target_specs(const std::string& text);
std::string to_string(TargetKind k);

struct TstrOptions {
    int repeats = 5;
    std::uint64_t seed = 1;
    double train_fraction = 0.8;
    double ridge_lambda = 1.0;
    LogisticOptions logistic;
};

struct TstrTargetResult {
    std::string name;
    TargetKind kind = TargetKind::Continuous;
    std::string metric;  // "MAE" or "F1"
    std::optional<double> mean;
    std::optional<double> std;
    int n_repeats = 0;
    std::string error;  // set when the target could not be evaluated
    bool operator==(const TstrTargetResult&) const = default;
};

struct TstrReport {
    std::vector<TstrTargetResult> targets;
    bool operator==(const TstrReport&) const = default;
};

/// Train on the synthetic table, test on the full real table. Each repeat r
/// fits on a seeded (seed + r) subsample of train_fraction of the usable
/// synthetic rows. Feature columns are those shared by both tables;
/// target tables are aligned row by row with their feature tables. Rows
/// with any missing feature or target value are skipped per target.
TstrReport tstr_evaluate(const FeatureMatrix& synth_features, const FeatureMatrix& synth_targets,
                         const FeatureMatrix& real_features, const FeatureMatrix& real_targets,
                         const std::vector<TargetSpec>& targets, const TstrOptions& opts = {});

/// "7.72 (0.13)".
std::string format_mean_std(double mean, double std, int decimals = 2);

}  // namespace fundval::stats
