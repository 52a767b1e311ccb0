#include "fundval/tstr.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <sstream>

#include "fundval/error.hpp"
#include "fundval/parallel.hpp"
#include "fundval/stats.hpp"

namespace fundval::stats {

std::vector<TargetSpec> parse_target_specs(const std::string& text) {
    std::vector<TargetSpec> specs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ArgumentError("target spec '" + item + "' lacks ':kind'");
        TargetSpec t;
        t.name = item.substr(0, colon);
        const std::string kind = item.substr(colon + 1);
        if (kind == "cont" || kind == "continuous") {
            t.kind = TargetKind::Continuous;
        } else if (kind == "bin" || kind == "binary") {
            t.kind = TargetKind::Binary;
        } else {
            throw ArgumentError("target kind must be cont or bin, got '" + kind + "'");
        }
        if (t.name.empty()) throw ArgumentError("empty target name");
        specs.push_back(std::move(t));
    }
    if (specs.empty()) throw ArgumentError("no targets given");
    return specs;
}

std::string to_string(TargetKind k) { return k == TargetKind::Continuous ? "continuous" : "binary"; }

std::string format_mean_std(double mean, double std, int decimals) {
    return fmt::format("{:.{}f} ({:.{}f})", mean, decimals, std, decimals);
}

namespace {

struct Design {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

Design complete_cases(const FeatureMatrix& features, const FeatureMatrix& targets,
                      const std::vector<std::size_t>& feature_cols, std::size_t target_col) {
    if (features.rows() != targets.rows()) {
        throw ArgumentError("feature and target tables have different row counts");
    }
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < features.rows(); ++r) {
        bool ok = targets.at(r, target_col).has_value();
        for (std::size_t c : feature_cols) ok = ok && features.at(r, c).has_value();
        if (ok) rows.push_back(r);
    }
    Design d;
    d.x = features.dense(rows, feature_cols);
    d.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) d.y(static_cast<Eigen::Index>(i)) = *targets.at(rows[i], target_col);
    return d;
}

Eigen::VectorXi as_labels(const Eigen::VectorXd& y) {
    Eigen::VectorXi out(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) != 0.0 && y(i) != 1.0) throw ArgumentError("binary target values must be 0 or 1");
        out(i) = static_cast<int>(y(i));
    }
    return out;
}

std::vector<Eigen::Index> subsample(Eigen::Index n, double fraction, std::uint64_t seed) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::uint64_t state = seed;
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(i, state));
        std::swap(idx[i - 1], idx[j]);
    }
    const auto keep = std::max<Eigen::Index>(2, static_cast<Eigen::Index>(std::floor(fraction * static_cast<double>(n))));
    idx.resize(static_cast<std::size_t>(std::min(keep, n)));
    std::sort(idx.begin(), idx.end());
    return idx;
}

double evaluate_repeat(const Design& train, const Design& test, const TargetSpec& spec,
                       const TstrOptions& opts, int repeat) {
    const auto rows = subsample(train.x.rows(), opts.train_fraction, opts.seed + static_cast<std::uint64_t>(repeat));
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), train.x.cols());
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = train.x.row(rows[i]);
        y(static_cast<Eigen::Index>(i)) = train.y(rows[i]);
    }
    if (spec.kind == TargetKind::Continuous) {
        const RidgeModel m = ridge_regression(x, y, opts.ridge_lambda);
        return (m.predict(test.x) - test.y).cwiseAbs().mean();
    }
    LogisticOptions lo = opts.logistic;
    lo.seed = opts.seed + static_cast<std::uint64_t>(repeat);
    const LogisticModel m = logistic_binary(x, as_labels(y), lo);
    const Eigen::VectorXi pred = m.predict(test.x);
    const Eigen::VectorXi truth = as_labels(test.y);
    return f1_score(std::span<const int>(pred.data(), static_cast<std::size_t>(pred.size())),
                    std::span<const int>(truth.data(), static_cast<std::size_t>(truth.size())))
        .f1;
}

}  // namespace

TstrReport tstr_evaluate(const FeatureMatrix& synth_features, const FeatureMatrix& synth_targets,
                         const FeatureMatrix& real_features, const FeatureMatrix& real_targets,
                         const std::vector<TargetSpec>& targets, const TstrOptions& opts) {
    if (opts.repeats < 1) throw ArgumentError("tstr: repeats must be >= 1");
    if (!(opts.train_fraction > 0.0 && opts.train_fraction <= 1.0)) {
        throw ArgumentError("tstr: train fraction must lie in (0, 1]");
    }
    std::vector<std::size_t> synth_cols;
    std::vector<std::size_t> real_cols;
    for (std::size_t c = 0; c < synth_features.cols(); ++c) {
        if (const auto rc = real_features.find_column(synth_features.column_names()[c])) {
            synth_cols.push_back(c);
            real_cols.push_back(*rc);
        }
    }
    if (synth_cols.empty()) throw ArgumentError("tstr: no shared feature columns");

    TstrReport report;
    report.targets.resize(targets.size());
    parallel_for(0, targets.size(), [&](std::size_t t) {
        const TargetSpec& spec = targets[t];
        TstrTargetResult& res = report.targets[t];
        res.name = spec.name;
        res.kind = spec.kind;
        res.metric = spec.kind == TargetKind::Continuous ? "MAE" : "F1";
        try {
            const auto sc = synth_targets.find_column(spec.name);
            const auto rc = real_targets.find_column(spec.name);
            if (!sc || !rc) throw ArgumentError("target column '" + spec.name + "' not found");
            // Columns that are entirely missing in either table cannot be used.
            std::vector<std::size_t> use_s;
            std::vector<std::size_t> use_r;
            for (std::size_t i = 0; i < synth_cols.size(); ++i) {
                if (synth_features.column_values(synth_cols[i]).size() == synth_features.rows() &&
                    real_features.column_values(real_cols[i]).size() == real_features.rows()) {
                    use_s.push_back(synth_cols[i]);
                    use_r.push_back(real_cols[i]);
                }
            }
            if (use_s.empty()) throw ArgumentError("no fully observed feature columns");
            const Design train = complete_cases(synth_features, synth_targets, use_s, *sc);
            const Design test = complete_cases(real_features, real_targets, use_r, *rc);
            if (train.x.rows() < 3 || test.x.rows() < 1) throw ArgumentError("too few usable rows");

            std::vector<double> scores;
            for (int r = 0; r < opts.repeats; ++r) scores.push_back(evaluate_repeat(train, test, spec, opts, r));
            double sum = 0.0;
            for (double s : scores) sum += s;
            const double mean = sum / static_cast<double>(scores.size());
            double ss = 0.0;
            for (double s : scores) ss += (s - mean) * (s - mean);
            res.mean = mean;
            res.std = scores.size() > 1 ? std::sqrt(ss / static_cast<double>(scores.size() - 1)) : 0.0;
            res.n_repeats = opts.repeats;
        } catch (const std::exception& e) {
            res.error = e.what();
        }
    });
    return report;
}

}  // namespace fundval::stats
