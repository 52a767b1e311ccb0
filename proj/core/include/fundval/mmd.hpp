#pragma once

#include <optional>
#include <string>

#include "fundval/embedding.hpp"

namespace fundval::metrics {

enum class MmdEstimator { Unbiased, Biased };

struct MmdOptions {
    /// Gaussian kernel bandwidth h; nullopt selects the median heuristic.
    std::optional<double> bandwidth;
    MmdEstimator estimator = MmdEstimator::Unbiased;
};

struct MmdResult {
    double mmd2 = 0.0;
    double bandwidth = 0.0;
};

/// Lower median of all pairwise Euclidean distances in the pooled sample.
double median_heuristic_bandwidth(const EmbeddingSet& a, const EmbeddingSet& b);

/// Squared MMD with k(x,y) = exp(-||x-y||^2 / (2 h^2)).
MmdResult mmd_squared(const EmbeddingSet& a, const EmbeddingSet& b, const MmdOptions& opts = {});

MmdEstimator parse_estimator(const std::string& name);
std::string to_string(MmdEstimator e);

}  // namespace fundval::metrics
