#include "fundval/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fundval/error.hpp"
#include "fundval/parallel.hpp"

namespace fundval::metrics {

namespace {

double squared_distance(const Eigen::MatrixXd& x, Eigen::Index i, const Eigen::MatrixXd& y,
                        Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
        const double d = x(i, k) - y(j, k);
        s += d * d;
    }
    return s;
}

// Sum over (i, j) of k(x_i, y_j), optionally skipping i == j. Each row is
// summed independently and the row sums are reduced in index order.
double kernel_sum(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double inv_two_h2,
                  bool skip_diagonal) {
    std::vector<double> row_sums(static_cast<std::size_t>(x.rows()), 0.0);
    parallel_for(0, row_sums.size(), [&](std::size_t ii) {
        const auto i = static_cast<Eigen::Index>(ii);
        double acc = 0.0;
        for (Eigen::Index j = 0; j < y.rows(); ++j) {
            if (skip_diagonal && i == j) continue;
            acc += std::exp(-squared_distance(x, i, y, j) * inv_two_h2);
        }
        row_sums[ii] = acc;
    });
    double total = 0.0;
    for (double v : row_sums) total += v;
    return total;
}

}  // namespace

double median_heuristic_bandwidth(const EmbeddingSet& a, const EmbeddingSet& b) {
    if (a.d() != b.d()) throw ArgumentError("median heuristic: dimension mismatch");
    Eigen::MatrixXd pooled(a.n() + b.n(), a.d());
    pooled << a.matrix(), b.matrix();
    const Eigen::Index n = pooled.rows();
    if (n < 2) throw ArgumentError("median heuristic: need at least two pooled samples");

    // Row i owns pairs (i, j > i); offsets give a fixed layout.
    std::vector<std::size_t> offset(static_cast<std::size_t>(n) + 1, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        offset[static_cast<std::size_t>(i) + 1] = offset[static_cast<std::size_t>(i)] + static_cast<std::size_t>(n - 1 - i);
    }
    std::vector<double> dists(offset.back());
    parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t ii) {
        const auto i = static_cast<Eigen::Index>(ii);
        std::size_t k = offset[ii];
        for (Eigen::Index j = i + 1; j < n; ++j) {
            dists[k++] = std::sqrt(squared_distance(pooled, i, pooled, j));
        }
    });
    const std::size_t mid = (dists.size() - 1) / 2;
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
    return dists[mid];
}

MmdResult mmd_squared(const EmbeddingSet& a, const EmbeddingSet& b, const MmdOptions& opts) {
    if (a.n() < 1 || b.n() < 1) throw ArgumentError("mmd: empty sample");
    if (a.d() != b.d()) throw ArgumentError("mmd: dimension mismatch");
    if (opts.estimator == MmdEstimator::Unbiased && (a.n() < 2 || b.n() < 2)) {
        throw ArgumentError("mmd: unbiased estimator needs at least two samples per set");
    }

    MmdResult r;
    r.bandwidth = opts.bandwidth ? *opts.bandwidth : median_heuristic_bandwidth(a, b);
    if (!(r.bandwidth > 0.0) || !std::isfinite(r.bandwidth)) {
        throw ArgumentError("mmd: bandwidth must be positive (median heuristic gave " +
                            std::to_string(r.bandwidth) + ")");
    }
    const double inv = 1.0 / (2.0 * r.bandwidth * r.bandwidth);
    const auto na = static_cast<double>(a.n());
    const auto nb = static_cast<double>(b.n());
    const bool unbiased = opts.estimator == MmdEstimator::Unbiased;

    const double kaa = kernel_sum(a.matrix(), a.matrix(), inv, unbiased);
    const double kbb = kernel_sum(b.matrix(), b.matrix(), inv, unbiased);
    const double kab = kernel_sum(a.matrix(), b.matrix(), inv, false);

    if (unbiased) {
        r.mmd2 = kaa / (na * (na - 1.0)) + kbb / (nb * (nb - 1.0)) - 2.0 * kab / (na * nb);
    } else {
        r.mmd2 = kaa / (na * na) + kbb / (nb * nb) - 2.0 * kab / (na * nb);
    }
    return r;
}

MmdEstimator parse_estimator(const std::string& name) {
    if (name == "unbiased") return MmdEstimator::Unbiased;
    if (name == "biased") return MmdEstimator::Biased;
    throw ArgumentError("unknown MMD estimator '" + name + "' (expected unbiased|biased)");
}

std::string to_string(MmdEstimator e) {
    return e == MmdEstimator::Unbiased ? "unbiased" : "biased";
}

}  // namespace fundval::metrics
