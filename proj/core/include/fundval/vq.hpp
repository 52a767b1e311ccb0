#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "fundval/embedding.hpp"

namespace fundval::vq {

/// K x d matrix of code vectors e_k.
class Codebook {
public:
    Codebook() = default;
    explicit Codebook(Eigen::MatrixXd entries);

    [[nodiscard]] Eigen::Index size() const { return entries_.rows(); }
    [[nodiscard]] Eigen::Index dim() const { return entries_.cols(); }
    [[nodiscard]] const Eigen::MatrixXd& entries() const { return entries_; }

private:
    Eigen::MatrixXd entries_;
};

/// h x w grid of d-dimensional latent vectors stored as (h*w) x d, row-major
/// over the grid (cell (i, j) is row i*w + j).
class LatentGrid {
public:
    LatentGrid() = default;
    LatentGrid(int h, int w, Eigen::MatrixXd vectors);

    [[nodiscard]] int height() const { return h_; }
    [[nodiscard]] int width() const { return w_; }
    [[nodiscard]] Eigen::Index dim() const { return vectors_.cols(); }
    [[nodiscard]] Eigen::Index cells() const { return vectors_.rows(); }
    [[nodiscard]] const Eigen::MatrixXd& vectors() const { return vectors_; }

private:
    int h_ = 0;
    int w_ = 0;
    Eigen::MatrixXd vectors_;
};

inline constexpr double kDefaultCommitmentBeta = 0.25;

struct QuantizationResult {
    std::vector<std::int32_t> indices;  // h*w, row-major
    LatentGrid quantized;
    double codebook_loss = 0.0;    // mean ||z - z_q||^2
    double commitment_loss = 0.0;  // beta * mean ||z - z_q||^2
    double perplexity = 1.0;
};

enum class DistanceRoute {
    /// sum_k (z_k - e_k)^2 evaluated directly.
    Direct,
    /// ||z||^2 - 2 z.e + ||e||^2 with cached code norms.
    Expanded,
};

/// Nearest code per cell by squared Euclidean distance; ties go to the
/// lowest index.
QuantizationResult quantize(const LatentGrid& z, const Codebook& cb,
                            double beta = kDefaultCommitmentBeta,
                            DistanceRoute route = DistanceRoute::Direct);

/// exp of the usage entropy; 1 when one code is used, K under uniform use.
double perplexity(std::span<const std::int32_t> indices, Eigen::Index k);

struct KMeansResult {
    Codebook codebook;
    std::vector<double> inertia;  // after each assignment step
    int iterations = 0;
};

/// k-means++ seeding then Lloyd iterations. Empty clusters are re-seeded
/// at the point farthest from its centroid. Stops early once assignments
/// are stable. Deterministic for a given seed and independent of the
/// worker count.
KMeansResult kmeans_codebook(const metrics::EmbeddingSet& set, Eigen::Index k, int iters,
                             std::uint64_t seed);

}  // namespace fundval::vq
