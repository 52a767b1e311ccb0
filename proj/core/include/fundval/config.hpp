#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fundval/mmd.hpp"

namespace fundval::app {

enum class Metric { Fid, Mmd, Msssim, EdgeLoss, Morphology, Permutation, Tstr };

/// Stage order used by the pipeline.
const std::array<Metric, 7>& all_metrics();
std::string to_string(Metric m);
/// Accepts the names printed by to_string ("fid", "edge_loss", ...).
Metric parse_metric(std::string_view name);

struct DatasetSpec {
    std::string name;
    std::filesystem::path manifest;
    std::optional<std::filesystem::path> embeddings;
    std::optional<std::filesystem::path> targets;
    bool operator==(const DatasetSpec&) const = default;
};

struct MmdConfig {
    std::optional<double> bandwidth;  // unset: median heuristic
    metrics::MmdEstimator estimator = metrics::MmdEstimator::Unbiased;
    bool operator==(const MmdConfig&) const = default;
};

struct PermutationConfig {
    int n_permutations = 10000;
    double threshold = 0.05;
    std::uint64_t seed = 1;
    bool operator==(const PermutationConfig&) const = default;
};

struct TstrConfig {
    std::string targets;  // "age:cont,sex:bin"; empty disables the stage
    int repeats = 5;
    std::uint64_t seed = 1;
    double ridge_lambda = 1.0;
    double train_fraction = 0.8;
    bool operator==(const TstrConfig&) const = default;
};

struct PipelineConfig {
    DatasetSpec real;  // name is always "Real"
    std::vector<DatasetSpec> synth;
    std::vector<Metric> metrics;  // canonical stage order, no duplicates
    std::vector<double> scales = {1.0, 2.0, 3.0};
    MmdConfig mmd;
    PermutationConfig permutation;
    TstrConfig tstr;
    std::filesystem::path output_dir = "out";
    /// Directory relative paths are resolved against. Not serialized.
    std::filesystem::path base_dir;

    [[nodiscard]] bool enabled(Metric m) const;
    [[nodiscard]] std::filesystem::path resolve(const std::filesystem::path& p) const;
    bool operator==(const PipelineConfig& o) const;
};

/// Strict parse: unknown keys and missing required keys throw ConfigError.
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
/// Reads a config file; relative paths resolve against its directory.
PipelineConfig load_config(const std::filesystem::path& path);
/// Canonical JSON with every field and default spelled out.
std::string serialize_config(const PipelineConfig& cfg);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const PipelineConfig& cfg);
/// Throws ConfigError naming the first referenced file that does not exist.
void validate_paths(const PipelineConfig& cfg);

}  // namespace fundval::app
