#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fundval/config.hpp"
#include "fundval/feature_matrix.hpp"
#include "fundval/report.hpp"

namespace fundval::app {

/// Library version, e.g. "0.3.0".
const char* version();

/// One manifest row. File paths are resolved against the manifest's
/// directory; empty cells and absent columns stay unset.
struct ManifestEntry {
    std::string id;
    std::optional<std::filesystem::path> image;
    std::optional<std::filesystem::path> vessel;
    std::optional<std::filesystem::path> artery;
    std::optional<std::filesystem::path> vein;
    std::optional<std::filesystem::path> disc;
    std::optional<std::filesystem::path> cup;
    std::optional<std::size_t> embedding_row;
};

/// Requires an "id" column. Throws IoError if the file cannot be read.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

struct MorphologyBatch {
    stats::FeatureMatrix features;  // manifest order, skipped rows omitted
    std::vector<std::string> skipped;
    std::vector<std::string> messages;
};

/// Extracts the retinal feature row of every entry that has a vessel mask.
/// Unreadable entries are skipped and reported by id.
MorphologyBatch extract_features(const std::vector<ManifestEntry>& entries);

using LogFn = std::function<void(std::string_view)>;

struct PipelineOutput {
    MetricReport report;
    /// (dataset name, feature table) for every dataset that was processed.
    std::vector<std::pair<std::string, stats::FeatureMatrix>> features;
};

/// Runs the enabled stages in order: fidelity, morphology, permutation,
/// TSTR. A failing stage is recorded in the report and the remaining stages
/// still run. Throws IoError when a manifest cannot be read.
PipelineOutput run_pipeline(const PipelineConfig& cfg, const LogFn& log = {});

}  // namespace fundval::app
