#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

namespace fundval::stats {

/// Column means and standard deviations used to standardize features.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;  // 1 for constant columns

    static Standardizer fit(const Eigen::MatrixXd& x);
    [[nodiscard]] Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

struct RidgeModel {
    Eigen::VectorXd weights;               // original feature scale
    double intercept = 0.0;
    Eigen::VectorXd standardized_weights;  // solution of (Z'Z + lambda I) w = Z'(y - ybar)
    Standardizer standardizer;
    double lambda = 0.0;

    [[nodiscard]] Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

/// Ridge regression on standardized columns with an unpenalized intercept.
/// Throws ArgumentError for a singular system at lambda = 0.
RidgeModel ridge_regression(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda);

struct LogisticOptions {
    int epochs = 500;
    double learning_rate = 0.5;
    std::uint64_t seed = 0;
};

struct LogisticModel {
    Eigen::VectorXd weights;  // on standardized features
    double bias = 0.0;
    Standardizer standardizer;

    [[nodiscard]] Eigen::VectorXd probabilities(const Eigen::MatrixXd& x) const;
    /// 1 where probability >= 0.5.
    [[nodiscard]] Eigen::VectorXi predict(const Eigen::MatrixXd& x) const;
};

/// Full-batch gradient descent on the mean log-loss. Labels must be 0/1
/// with both classes present.
LogisticModel logistic_binary(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                              const LogisticOptions& opts = {});

struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Positive class is 1. F1 is 0 when precision + recall is 0.
F1Score f1_score(std::span<const int> predicted, std::span<const int> truth);

}  // namespace fundval::stats
