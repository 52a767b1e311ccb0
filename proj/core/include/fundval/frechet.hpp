#pragma once

#include <Eigen/Dense>

#include "fundval/embedding.hpp"

namespace fundval::metrics {

/// Mean and unbiased covariance of an embedding population.
struct GaussianSummary {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
    Eigen::Index n = 0;

    [[nodiscard]] Eigen::Index dim() const { return mean.size(); }
};

/// Column means and (n-1)-normalized covariance, symmetrized.
GaussianSummary gaussian_summary(const EmbeddingSet& set);

struct FrechetResult {
    double distance = 0.0;
    /// Set when a covariance was singular and both were regularized by eps*I.
    bool regularized = false;
};

inline constexpr double kFrechetEpsilon = 1e-6;

/// ||mu_a - mu_b||^2 + tr(S_a + S_b - 2 (S_a S_b)^{1/2}).
/// tr((S_a S_b)^{1/2}) is taken as the sum of square roots of the
/// (clamped) eigenvalues of S_a^{1/2} S_b S_a^{1/2}, which shares the
/// spectrum of S_a S_b and is symmetric PSD.
FrechetResult frechet_distance(const GaussianSummary& a, const GaussianSummary& b);

/// Principal square root of a symmetric PSD matrix (eigenvalues clamped at 0).
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m);

}  // namespace fundval::metrics
