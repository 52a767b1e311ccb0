#include "fundval/vq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fundval/error.hpp"
#include "fundval/parallel.hpp"

namespace fundval::vq {

Codebook::Codebook(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.cols() < 1) throw ArgumentError("Codebook: K and d must be >= 1");
    if (!entries_.allFinite()) throw ArgumentError("Codebook: non-finite entry");
}

LatentGrid::LatentGrid(int h, int w, Eigen::MatrixXd vectors) : h_(h), w_(w), vectors_(std::move(vectors)) {
    if (h < 1 || w < 1) throw ArgumentError("LatentGrid: h and w must be >= 1");
    if (vectors_.rows() != static_cast<Eigen::Index>(h) * w || vectors_.cols() < 1) {
        throw ArgumentError("LatentGrid: expected (h*w) x d vectors");
    }
    if (!vectors_.allFinite()) throw ArgumentError("LatentGrid: non-finite entry");
}

QuantizationResult quantize(const LatentGrid& z, const Codebook& cb, double beta, DistanceRoute route) {
    if (z.dim() != cb.dim()) throw ArgumentError("quantize: latent and codebook dimensions differ");
    if (!(beta >= 0.0)) throw ArgumentError("quantize: beta must be non-negative");

    const Eigen::MatrixXd& zv = z.vectors();
    const Eigen::MatrixXd& e = cb.entries();
    const Eigen::Index cells = zv.rows();
    const Eigen::Index k = e.rows();
    const Eigen::Index d = e.cols();

    Eigen::VectorXd code_norms;
    if (route == DistanceRoute::Expanded) code_norms = e.rowwise().squaredNorm();

    QuantizationResult r;
    r.indices.assign(static_cast<std::size_t>(cells), 0);
    std::vector<double> residual(static_cast<std::size_t>(cells), 0.0);

    parallel_for(0, static_cast<std::size_t>(cells), [&](std::size_t cc) {
        const auto c = static_cast<Eigen::Index>(cc);
        Eigen::Index best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        if (route == DistanceRoute::Direct) {
            for (Eigen::Index j = 0; j < k; ++j) {
                double s = 0.0;
                for (Eigen::Index t = 0; t < d; ++t) {
                    const double diff = zv(c, t) - e(j, t);
                    s += diff * diff;
                }
                if (s < best_d) {
                    best_d = s;
                    best = j;
                }
            }
        } else {
            const double zn = zv.row(c).squaredNorm();
            for (Eigen::Index j = 0; j < k; ++j) {
                const double s = zn - 2.0 * zv.row(c).dot(e.row(j)) + code_norms(j);
                if (s < best_d) {
                    best_d = s;
                    best = j;
                }
            }
        }
        r.indices[cc] = static_cast<std::int32_t>(best);
        residual[cc] = (zv.row(c) - e.row(best)).squaredNorm();
    });

    Eigen::MatrixXd q(cells, d);
    double total = 0.0;
    for (Eigen::Index c = 0; c < cells; ++c) {
        q.row(c) = e.row(r.indices[static_cast<std::size_t>(c)]);
        total += residual[static_cast<std::size_t>(c)];
    }
    r.quantized = LatentGrid(z.height(), z.width(), std::move(q));
    r.codebook_loss = total / static_cast<double>(cells);
    r.commitment_loss = beta * r.codebook_loss;
    r.perplexity = perplexity(r.indices, k);
    return r;
}

double perplexity(std::span<const std::int32_t> indices, Eigen::Index k) {
    if (k < 1) throw ArgumentError("perplexity: K must be >= 1");
    if (indices.empty()) throw ArgumentError("perplexity: no indices");
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    for (std::int32_t i : indices) {
        if (i < 0 || i >= k) throw ArgumentError("perplexity: index out of range");
        ++counts[static_cast<std::size_t>(i)];
    }
    // exp(H) = N / prod_k c_k^(c_k/N). Grouping codes by their count makes
    // the uniform and single-code cases exact (exponent is exactly 1).
    std::map<std::int64_t, std::int64_t> codes_with_count;
    for (std::int64_t c : counts) {
        if (c > 0) ++codes_with_count[c];
    }
    const auto n = static_cast<double>(indices.size());
    double geo = 1.0;
    for (const auto& [count, codes] : codes_with_count) {
        const double exponent = static_cast<double>(count * codes) / n;
        geo *= std::pow(static_cast<double>(count), exponent);
    }
    const double p = n / geo;
    return std::clamp(p, 1.0, static_cast<double>(k));
}

}  // namespace fundval::vq
