#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fundval/error.hpp"
#include "fundval/parallel.hpp"
#include "fundval/vq.hpp"

namespace fundval::vq {

namespace {

// 53-bit uniform in [0,1) straight from the engine, so draws do not depend
// on the standard library's distribution implementation.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sq_dist(const Eigen::MatrixXd& x, Eigen::Index i, const Eigen::MatrixXd& c, Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
        const double d = x(i, t) - c(j, t);
        s += d * d;
    }
    return s;
}

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& x, Eigen::Index k, std::mt19937_64& rng) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd centers(k, x.cols());
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);

    auto first = static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n));
    first = std::min(first, n - 1);
    centers.row(0) = x.row(first);
    chosen[static_cast<std::size_t>(first)] = 1;

    std::vector<double> d2(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = sq_dist(x, i, centers, 0);

    for (Eigen::Index c = 1; c < k; ++c) {
        double total = 0.0;
        for (double v : d2) total += v;
        Eigen::Index pick = -1;
        if (total > 0.0) {
            const double target = uniform01(rng) * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2[static_cast<std::size_t>(i)];
                if (acc > target && d2[static_cast<std::size_t>(i)] > 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {
                for (Eigen::Index i = n - 1; i >= 0; --i) {
                    if (d2[static_cast<std::size_t>(i)] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        }
        if (pick < 0) {
            // Every remaining point coincides with a centre: take the first unused one.
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!chosen[static_cast<std::size_t>(i)]) {
                    pick = i;
                    break;
                }
            }
        }
        centers.row(c) = x.row(pick);
        chosen[static_cast<std::size_t>(pick)] = 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], sq_dist(x, i, centers, c));
        }
    }
    return centers;
}

}  // namespace

KMeansResult kmeans_codebook(const metrics::EmbeddingSet& set, Eigen::Index k, int iters,
                             std::uint64_t seed) {
    const Eigen::MatrixXd& x = set.matrix();
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    if (k < 1) throw ArgumentError("kmeans: K must be >= 1");
    if (n < k) throw ArgumentError("kmeans: need at least K samples (n=" + std::to_string(n) +
                                   ", K=" + std::to_string(k) + ")");
    if (iters < 1) throw ArgumentError("kmeans: iterations must be >= 1");

    std::mt19937_64 rng(seed);
    Eigen::MatrixXd centers = seed_plus_plus(x, k, rng);

    std::vector<Eigen::Index> assign(static_cast<std::size_t>(n), -1);
    std::vector<Eigen::Index> next(static_cast<std::size_t>(n), 0);
    std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
    KMeansResult result;

    for (int it = 0; it < iters; ++it) {
        parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t ii) {
            const auto i = static_cast<Eigen::Index>(ii);
            Eigen::Index best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < k; ++j) {
                const double s = sq_dist(x, i, centers, j);
                if (s < best_d) {
                    best_d = s;
                    best = j;
                }
            }
            next[ii] = best;
            dist[ii] = best_d;
        });
        double inertia = 0.0;
        for (double v : dist) inertia += v;
        result.inertia.push_back(inertia);
        result.iterations = it + 1;

        if (next == assign) break;
        assign = next;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
        std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(assign[static_cast<std::size_t>(i)]) += x.row(i);
            ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
        }
        for (Eigen::Index j = 0; j < k; ++j) {
            if (counts[static_cast<std::size_t>(j)] > 0) {
                centers.row(j) = sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
                continue;
            }
            // Empty cluster: move it onto the worst-fitted point.
            Eigen::Index far = 0;
            for (Eigen::Index i = 1; i < n; ++i) {
                if (dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(far)]) far = i;
            }
            centers.row(j) = x.row(far);
            dist[static_cast<std::size_t>(far)] = 0.0;
        }
    }
    result.codebook = Codebook(centers);
    return result;
}

}  // namespace fundval::vq
