#pragma once

#include <span>
#include <vector>

namespace fundval::metrics {

/// Mean absolute difference between two embeddings of equal length.
double embedding_l1_distance(std::span<const double> a, std::span<const double> b);

/// One layer of backbone activations, channel-major (c, h, w).
struct FeatureTensor {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    [[nodiscard]] std::size_t element_count() const {
        return static_cast<std::size_t>(channels) * height * width;
    }
};

/// Activations from several tagged backbone layers.
struct ActivationStack {
    std::vector<int> layer_ids;
    std::vector<FeatureTensor> layers;

    /// Throws ArgumentError on empty stacks or inconsistent shapes.
    void validate() const;
};

/// Sum over layers of the per-layer RMS difference.
double perceptual_stack_distance(const ActivationStack& a, const ActivationStack& b);

}  // namespace fundval::metrics
