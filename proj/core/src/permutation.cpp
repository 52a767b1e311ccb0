#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fundval/error.hpp"
#include "fundval/parallel.hpp"
#include "fundval/stats.hpp"

namespace fundval::stats {

namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::optional<std::pair<double, double>> mean_std(const std::vector<double>& v) {
    if (v.size() < 2) return std::nullopt;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::make_pair(m, std::sqrt(ss / static_cast<double>(v.size() - 1)));
}

void check_groups(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw ArgumentError("permutation test: each group needs >= 2 values");
}

// Tolerance for "T_perm >= T_obs": permuted splits that are mathematically
// as extreme as the observed one can differ by summation-order rounding.
double tie_tolerance(std::span<const double> pooled, double t_obs) {
    double scale = t_obs;
    for (double v : pooled) scale = std::max(scale, std::abs(v));
    return 1e-12 * scale;
}

double split_statistic(const std::vector<double>& values, std::size_t n_first) {
    return mean_difference(std::span<const double>(values.data(), n_first),
                           std::span<const double>(values.data() + n_first, values.size() - n_first));
}

}  // namespace

std::uint64_t uniform_below(std::uint64_t bound, std::uint64_t& state) {
    // splitmix64 stream with rejection to avoid modulo bias.
    auto next = [&state] {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = next();
    } while (r >= limit);
    return r % bound;
}

std::vector<ColumnSummary> summary_stats(const FeatureMatrix& fm) {
    std::vector<ColumnSummary> out;
    for (std::size_t c = 0; c < fm.cols(); ++c) {
        ColumnSummary s;
        s.name = fm.column_names()[c];
        const auto values = fm.column_values(c);
        s.count = values.size();
        if (const auto ms = mean_std(values)) {
            s.mean = ms->first;
            s.std = ms->second;
        }
        out.push_back(std::move(s));
    }
    return out;
}

ZScoreResult zscore_normalize(const FeatureMatrix& real, const FeatureMatrix& other) {
    if (real.column_names() != other.column_names()) {
        throw ArgumentError("zscore_normalize: column names differ between tables");
    }
    ZScoreResult r{real, other, {}};
    for (std::size_t c = 0; c < real.cols(); ++c) {
        const auto values = real.column_values(c);
        double mean = values.empty() ? 0.0 : mean_of(values);
        double scale = 1.0;
        const auto ms = mean_std(values);
        if (ms && ms->second > 0.0) {
            scale = ms->second;
        } else {
            r.flagged_columns.push_back(real.column_names()[c]);
        }
        for (FeatureMatrix* fm : {&r.real_z, &r.other_z}) {
            for (std::size_t row = 0; row < fm->rows(); ++row) {
                auto& cell = fm->at(row, c);
                if (cell) *cell = (*cell - mean) / scale;
            }
        }
    }
    return r;
}

double mean_difference(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ArgumentError("mean_difference: empty group");
    return std::abs(mean_of(a) - mean_of(b));
}

double permutation_pvalue(std::span<const double> a, std::span<const double> b, int n_permutations,
                          std::uint64_t seed) {
    check_groups(a, b);
    if (n_permutations < 1) throw ArgumentError("permutation test: need at least one permutation");

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());
    const std::size_t n_first = std::min(a.size(), b.size());

    const double t_obs = mean_difference(a, b);
    const double tol = tie_tolerance(pooled, t_obs);
    std::uint64_t state = seed;
    std::vector<double> work = pooled;
    long extreme = 0;
    for (int m = 0; m < n_permutations; ++m) {
        // Partial Fisher-Yates: only the first n_first slots need to be random.
        for (std::size_t i = 0; i < n_first; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(uniform_below(work.size() - i, state));
            std::swap(work[i], work[j]);
        }
        if (split_statistic(work, n_first) >= t_obs - tol) ++extreme;
    }
    return (1.0 + static_cast<double>(extreme)) / (1.0 + n_permutations);
}

double exhaustive_permutation_pvalue(std::span<const double> a, std::span<const double> b) {
    check_groups(a, b);
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size();
    const std::size_t k = a.size();

    double total = 1.0;
    for (std::size_t i = 0; i < k; ++i) total = total * static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (total > 1e6) throw ArgumentError("exhaustive permutation test: too many splits");

    const double t_obs = mean_difference(a, b);
    const double tol = tie_tolerance(pooled, t_obs);
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<double> first(k);
    std::vector<double> rest(n - k);
    long extreme = 0;
    long splits = 0;
    while (true) {
        std::size_t fi = 0;
        std::size_t ri = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (fi < k && idx[fi] == i) {
                first[fi++] = pooled[i];
            } else {
                rest[ri++] = pooled[i];
            }
        }
        if (mean_difference(first, rest) >= t_obs - tol) ++extreme;
        ++splits;
        // next k-combination in lexicographic order
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return static_cast<double>(extreme) / static_cast<double>(splits);
}

PermutationReport distribution_match_report(const FeatureMatrix& real, const FeatureMatrix& synth,
                                            double threshold, int n_permutations, std::uint64_t seed) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ArgumentError("threshold must lie in [0,1]");
    const ZScoreResult z = zscore_normalize(real, synth);

    PermutationReport report;
    report.threshold = threshold;
    report.n_permutations = n_permutations;
    report.seed = seed;
    report.features.resize(real.cols());

    parallel_for(0, real.cols(), [&](std::size_t c) {
        FeatureTestResult& f = report.features[c];
        f.name = real.column_names()[c];
        const auto rv = z.real_z.column_values(c);
        const auto sv = z.other_z.column_values(c);
        if (const auto ms = mean_std(rv)) {
            f.real_mean = ms->first;
            f.real_std = ms->second;
        }
        if (const auto ms = mean_std(sv)) {
            f.synth_mean = ms->first;
            f.synth_std = ms->second;
        }
        if (rv.size() >= 2 && sv.size() >= 2) {
            f.p_value = permutation_pvalue(rv, sv, n_permutations, seed + c);
            f.match = *f.p_value > threshold;
        }
    });
    for (const auto& f : report.features) report.match_count += f.match ? 1 : 0;
    return report;
}

std::string format_match_summary(const std::string& model, const PermutationReport& report) {
    return model + ": " + std::to_string(report.match_count) + " high p-value" +
           (report.match_count == 1 ? "" : "s");
}

}  // namespace fundval::stats
