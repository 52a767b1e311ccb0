#include "fundval/regression.hpp"

#include <cmath>
#include <random>

#include "fundval/error.hpp"

namespace fundval::stats {

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
    if (x.rows() < 2) throw ArgumentError("standardize: need at least two rows");
    Standardizer s;
    s.mean = x.colwise().mean().transpose();
    s.scale.resize(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double ss = (x.col(j).array() - s.mean(j)).square().sum();
        const double sd = std::sqrt(ss / static_cast<double>(x.rows() - 1));
        s.scale(j) = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
    if (x.cols() != mean.size()) throw ArgumentError("standardize: column count mismatch");
    return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Eigen::VectorXd RidgeModel::predict(const Eigen::MatrixXd& x) const {
    return (x * weights).array() + intercept;
}

RidgeModel ridge_regression(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda) {
    if (x.rows() != y.size()) throw ArgumentError("ridge: X and y row counts differ");
    if (x.cols() < 1) throw ArgumentError("ridge: no feature columns");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ArgumentError("ridge: lambda must be >= 0");
    if (!x.allFinite() || !y.allFinite()) throw ArgumentError("ridge: non-finite input");

    RidgeModel m;
    m.lambda = lambda;
    m.standardizer = Standardizer::fit(x);
    const Eigen::MatrixXd z = m.standardizer.apply(x);
    const double ybar = y.mean();
    const Eigen::VectorXd yc = y.array() - ybar;

    Eigen::MatrixXd gram = z.transpose() * z;
    gram.diagonal().array() += lambda;
    const Eigen::VectorXd rhs = z.transpose() * yc;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    if (!(es.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, top))) {
        throw ArgumentError("ridge: normal equations are singular; use lambda > 0");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw ArgumentError("ridge: normal equations are singular; use lambda > 0");
    m.standardized_weights = llt.solve(rhs);

    m.weights = m.standardized_weights.array() / m.standardizer.scale.array();
    m.intercept = ybar - m.standardizer.mean.dot(m.weights);
    return m;
}

namespace {
double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}
}  // namespace

Eigen::VectorXd LogisticModel::probabilities(const Eigen::MatrixXd& x) const {
    const Eigen::VectorXd logits = (standardizer.apply(x) * weights).array() + bias;
    return logits.unaryExpr([](double t) { return sigmoid(t); });
}

Eigen::VectorXi LogisticModel::predict(const Eigen::MatrixXd& x) const {
    const Eigen::VectorXd p = probabilities(x);
    return p.unaryExpr([](double v) { return v >= 0.5 ? 1 : 0; });
}

LogisticModel logistic_binary(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, const LogisticOptions& opts) {
    if (x.rows() != y.size()) throw ArgumentError("logistic: X and y row counts differ");
    if (opts.epochs < 1 || !(opts.learning_rate > 0.0)) throw ArgumentError("logistic: invalid optimizer settings");
    int positives = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) != 0 && y(i) != 1) throw ArgumentError("logistic: labels must be 0 or 1");
        positives += y(i);
    }
    if (positives == 0 || positives == y.size()) throw ArgumentError("logistic: labels contain a single class");

    LogisticModel m;
    m.standardizer = Standardizer::fit(x);
    const Eigen::MatrixXd z = m.standardizer.apply(x);
    const Eigen::VectorXd target = y.cast<double>();

    std::mt19937_64 rng(opts.seed);
    m.weights.resize(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        m.weights(j) = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 0.02;
    }
    const auto n = static_cast<double>(x.rows());
    for (int e = 0; e < opts.epochs; ++e) {
        const Eigen::VectorXd logits = (z * m.weights).array() + m.bias;
        const Eigen::VectorXd resid = logits.unaryExpr([](double t) { return sigmoid(t); }) - target;
        m.weights -= opts.learning_rate * (z.transpose() * resid) / n;
        m.bias -= opts.learning_rate * resid.sum() / n;
    }
    return m;
}

F1Score f1_score(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size()) throw ArgumentError("f1: length mismatch");
    if (predicted.empty()) throw ArgumentError("f1: empty input");
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool p = predicted[i] == 1;
        const bool t = truth[i] == 1;
        tp += (p && t) ? 1 : 0;
        fp += (p && !t) ? 1 : 0;
        fn += (!p && t) ? 1 : 0;
    }
    F1Score s;
    s.precision = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
    s.recall = (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
    s.f1 = (s.precision + s.recall) > 0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

}  // namespace fundval::stats
