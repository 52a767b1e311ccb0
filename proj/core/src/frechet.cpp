#include "fundval/frechet.hpp"

#include <algorithm>
#include <cmath>

#include "fundval/error.hpp"

namespace fundval::metrics {

GaussianSummary gaussian_summary(const EmbeddingSet& set) {
    if (set.n() < 2) throw ArgumentError("gaussian_summary: need at least two samples");
    const Eigen::MatrixXd& x = set.matrix();
    GaussianSummary s;
    s.n = x.rows();
    s.mean = x.colwise().mean().transpose();
    const Eigen::MatrixXd centered = x.rowwise() - s.mean.transpose();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(s.n - 1);
    s.covariance = 0.5 * (cov + cov.transpose());
    return s;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw ArgumentError("psd_sqrt: eigendecomposition failed");
    const Eigen::VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

void check_summary(const GaussianSummary& s, const char* which) {
    const Eigen::Index d = s.mean.size();
    if (d < 1 || s.covariance.rows() != d || s.covariance.cols() != d) {
        throw ArgumentError(std::string("frechet_distance: malformed summary ") + which);
    }
    if (!s.mean.allFinite() || !s.covariance.allFinite()) {
        throw ArgumentError(std::string("frechet_distance: non-finite entries in ") + which);
    }
}

bool is_singular(const Eigen::MatrixXd& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double scale = std::max(1.0, std::abs(ev.maxCoeff()));
    return ev.minCoeff() <= 1e-12 * scale;
}

}  // namespace

FrechetResult frechet_distance(const GaussianSummary& a, const GaussianSummary& b) {
    check_summary(a, "a");
    check_summary(b, "b");
    if (a.dim() != b.dim()) throw ArgumentError("frechet_distance: dimension mismatch");

    FrechetResult result;
    Eigen::MatrixXd sa = a.covariance;
    Eigen::MatrixXd sb = b.covariance;
    if (is_singular(sa) || is_singular(sb)) {
        const Eigen::MatrixXd eps = kFrechetEpsilon * Eigen::MatrixXd::Identity(a.dim(), a.dim());
        sa += eps;
        sb += eps;
        result.regularized = true;
    }

    const Eigen::MatrixXd root_a = psd_sqrt(sa);
    Eigen::MatrixXd inner = root_a * sb * root_a;
    inner = 0.5 * (inner + inner.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inner, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ArgumentError("frechet_distance: eigensolve failed");
    const double tr_covmean = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

    const double mean_term = (a.mean - b.mean).squaredNorm();
    const double d = mean_term + sa.trace() + sb.trace() - 2.0 * tr_covmean;
    result.distance = std::max(d, 0.0);
    return result;
}

}  // namespace fundval::metrics
