#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fundval/stats.hpp"
#include "fundval/tstr.hpp"

namespace fundval::app {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n-1), 0 for one value
    std::size_t n = 0;
    bool operator==(const MeanStd&) const = default;
};

struct FidelitySection {
    std::optional<double> fid;
    std::optional<bool> fid_regularized;
    std::optional<double> mmd;
    std::optional<double> mmd_bandwidth;
    std::optional<MeanStd> msssim;
    std::optional<MeanStd> edge_loss;
    bool operator==(const FidelitySection&) const = default;
};

struct MorphologySection {
    std::size_t images = 0;
    std::vector<std::string> skipped;  // ids whose inputs could not be read
    std::vector<stats::ColumnSummary> columns;
    bool operator==(const MorphologySection&) const = default;
};

struct ModelReport {
    std::string name;
    FidelitySection fidelity;
    std::optional<MorphologySection> morphology;
    std::optional<stats::PermutationReport> permutation;
    std::optional<stats::TstrReport> tstr;
    bool operator==(const ModelReport&) const = default;
};

struct StageStatus {
    std::string stage;
    std::string status;  // ok | partial | failed
    std::vector<std::string> messages;
    bool operator==(const StageStatus&) const = default;
};

struct Provenance {
    std::string tool_version;
    std::string config_hash;
    std::vector<double> scales;
    std::string mmd_estimator;
    int n_permutations = 0;
    std::uint64_t permutation_seed = 0;
    std::uint64_t tstr_seed = 0;
    int tstr_repeats = 0;
    bool operator==(const Provenance&) const = default;
};

struct MetricReport {
    Provenance provenance;
    std::optional<MorphologySection> real_morphology;
    std::optional<stats::TstrReport> real_tstr;  // train-real, test-real baseline
    std::vector<ModelReport> models;
    std::vector<StageStatus> stages;

    /// True when any stage is partial or failed.
    [[nodiscard]] bool has_failures() const;
    bool operator==(const MetricReport&) const = default;
};

std::string report_to_json(const MetricReport& r);
/// Throws ConfigError on malformed input.
MetricReport report_from_json(std::string_view text);

std::string permutation_report_to_json(const stats::PermutationReport& r);
std::string tstr_report_to_json(const stats::TstrReport& r);

enum class RenderStyle { Json, Table };
RenderStyle parse_render_style(std::string_view name);

/// Table style: fidelity table (model, FID, MMD, MS-SSIM mean [std], plus
/// edge loss when present), permutation match counts, then the TSTR table
/// with one row per target and one column per model.
std::string render_report(const MetricReport& r, RenderStyle style);

/// "name  MAE  7.72 (0.13)"-style table for a single TSTR report.
std::string render_tstr_table(const stats::TstrReport& r, const std::string& column = "TSTR");

}  // namespace fundval::app
