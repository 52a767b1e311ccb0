#pragma once

// Slow, direct reference computations used to check the library.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "fundval/image.hpp"
#include "fundval/mask.hpp"

namespace oracle {

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double normal(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline Eigen::MatrixXd normal_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double mean = 0.0,
                                     double sd = 1.0) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = mean + sd * normal(rng);
    return m;
}

inline Eigen::MatrixXd random_psd(std::mt19937_64& rng, int d) {
    const Eigen::MatrixXd a = normal_matrix(rng, d, d);
    return a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
}

// tr((S1 S2)^(1/2)) from the eigenvalues of the non-symmetric product.
inline double frechet(const Eigen::VectorXd& m1, const Eigen::MatrixXd& s1, const Eigen::VectorXd& m2,
                      const Eigen::MatrixXd& s2) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(s1 * s2, false);
    double tr = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) tr += std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    return (m1 - m2).squaredNorm() + s1.trace() + s2.trace() - 2.0 * tr;
}

inline double gauss_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double h) {
    return std::exp(-(a - b).squaredNorm() / (2.0 * h * h));
}

inline double mmd2(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double h, bool biased) {
    const auto n = x.rows();
    const auto m = y.rows();
    double kxx = 0, kyy = 0, kxy = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (biased || i != j) kxx += gauss_kernel(x.row(i), x.row(j), h);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            if (biased || i != j) kyy += gauss_kernel(y.row(i), y.row(j), h);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j) kxy += gauss_kernel(x.row(i), y.row(j), h);
    const double dn = biased ? double(n) * n : double(n) * (n - 1);
    const double dm = biased ? double(m) * m : double(m) * (m - 1);
    return kxx / dn + kyy / dm - 2.0 * kxy / (double(n) * m);
}

// Nearest background pixel by exhaustive search; pixels beyond the frame are background.
inline fundval::img::GrayImage edt(const fundval::morph::BinaryMask& m) {
    fundval::img::GrayImage out(m.width, m.height, 0.0);
    std::vector<std::pair<int, int>> bg;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (!m.at(x, y)) bg.emplace_back(x, y);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y)) continue;
            const double edge = std::min({x + 1, m.width - x, y + 1, m.height - y});
            double best = edge * edge;
            for (const auto& [bx, by] : bg) {
                const double d = double(bx - x) * (bx - x) + double(by - y) * (by - y);
                best = std::min(best, d);
            }
            out.at(x, y) = std::sqrt(best);
        }
    }
    return out;
}

inline int nearest_code(const Eigen::RowVectorXd& z, const Eigen::MatrixXd& codes) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < codes.rows(); ++k) {
        double d = 0.0;
        for (Eigen::Index j = 0; j < z.size(); ++j) d += (z(j) - codes(k, j)) * (z(j) - codes(k, j));
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(k);
        }
    }
    return best;
}

// Direct 11x11 window sums over every valid position.
inline double msssim(fundval::img::GrayImage a, fundval::img::GrayImage b, int levels = 5) {
    const double w5[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    double wsum = 0;
    for (int l = 0; l < levels; ++l) wsum += w5[l];
    double g[11];
    double gs = 0;
    for (int i = 0; i < 11; ++i) {
        g[i] = std::exp(-double(i - 5) * (i - 5) / (2 * 1.5 * 1.5));
        gs += g[i];
    }
    for (double& v : g) v /= gs;
    const double c1 = 1e-4, c2 = 9e-4;
    double result = 1.0;
    for (int l = 0; l < levels; ++l) {
        double cs_acc = 0, l_acc = 0;
        int count = 0;
        for (int y = 0; y + 11 <= a.height; ++y) {
            for (int x = 0; x + 11 <= a.width; ++x) {
                double ma = 0, mb = 0;
                for (int j = 0; j < 11; ++j)
                    for (int i = 0; i < 11; ++i) {
                        ma += g[i] * g[j] * a.at(x + i, y + j);
                        mb += g[i] * g[j] * b.at(x + i, y + j);
                    }
                double va = 0, vb = 0, cov = 0;
                for (int j = 0; j < 11; ++j)
                    for (int i = 0; i < 11; ++i) {
                        const double da = a.at(x + i, y + j) - ma;
                        const double db = b.at(x + i, y + j) - mb;
                        va += g[i] * g[j] * da * da;
                        vb += g[i] * g[j] * db * db;
                        cov += g[i] * g[j] * da * db;
                    }
                cs_acc += (2 * cov + c2) / (va + vb + c2);
                l_acc += (2 * ma * mb + c1) / (ma * ma + mb * mb + c1);
                ++count;
            }
        }
        const double cs = cs_acc / count;
        const double lum = l_acc / count;
        const double w = levels == 5 ? w5[l] : w5[l] / wsum;
        const double term = l + 1 == levels ? cs * lum : cs;
        result *= term < 0 ? -std::pow(-term, w) : std::pow(term, w);
        if (l + 1 < levels) {
            fundval::img::GrayImage da(a.width / 2, a.height / 2), db(b.width / 2, b.height / 2);
            for (int y = 0; y < da.height; ++y)
                for (int x = 0; x < da.width; ++x) {
                    da.at(x, y) = (a.at(2 * x, 2 * y) + a.at(2 * x + 1, 2 * y) + a.at(2 * x, 2 * y + 1) +
                                   a.at(2 * x + 1, 2 * y + 1)) / 4;
                    db.at(x, y) = (b.at(2 * x, 2 * y) + b.at(2 * x + 1, 2 * y) + b.at(2 * x, 2 * y + 1) +
                                   b.at(2 * x + 1, 2 * y + 1)) / 4;
                }
            a = da;
            b = db;
        }
    }
    return result;
}

inline double abs_mean_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double sa = 0, sb = 0;
    for (double v : a) sa += v;
    for (double v : b) sb += v;
    return std::abs(sa / a.size() - sb / b.size());
}

// Fraction of all ways to pick |a| of the pooled values whose statistic
// reaches the observed one.
inline double enumerated_splits_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pool(a);
    pool.insert(pool.end(), b.begin(), b.end());
    const int n = static_cast<int>(pool.size());
    const double t_obs = abs_mean_diff(a, b);
    int total = 0, hits = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != static_cast<int>(a.size())) continue;
        std::vector<double> ga, gb;
        for (int i = 0; i < n; ++i) ((mask >> i) & 1u ? ga : gb).push_back(pool[i]);
        ++total;
        if (abs_mean_diff(ga, gb) >= t_obs - 1e-9) ++hits;
    }
    return double(hits) / total;
}

// Six widths combined by hand: three pairs, then the two largest-smallest
// partners with the middle value carried, then the final pair.
inline double knudtson_six(std::vector<double> w, double c) {
    std::sort(w.begin(), w.end(), std::greater<>());
    std::vector<double> r1 = {c * std::hypot(w[0], w[5]), c * std::hypot(w[1], w[4]), c * std::hypot(w[2], w[3])};
    std::sort(r1.begin(), r1.end(), std::greater<>());
    const double a = c * std::hypot(r1[0], r1[2]);
    const double b = r1[1];
    return c * std::hypot(a, b);
}

// Ridge on standardized columns via an explicit inverse.
inline Eigen::VectorXd ridge_standardized(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda) {
    const Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd z = x.rowwise() - mean;
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        const double sd = std::sqrt(z.col(j).squaredNorm() / double(x.rows() - 1));
        if (sd > 0) z.col(j) /= sd;
    }
    const Eigen::VectorXd yc = y.array() - y.mean();
    const Eigen::MatrixXd a = z.transpose() * z + lambda * Eigen::MatrixXd::Identity(z.cols(), z.cols());
    return a.inverse() * (z.transpose() * yc);
}

struct MeanSd {
    double mean;
    double sd;
};

inline MeanSd two_pass(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    const double m = s / v.size();
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (v.size() - 1))};
}

// Kolmogorov-Smirnov distance of a sample from Uniform(0,1).
inline double ks_uniform(std::vector<double> p) {
    std::sort(p.begin(), p.end());
    const double n = p.size();
    double d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        d = std::max(d, std::max((i + 1) / n - p[i], p[i] - i / n));
    }
    return d;
}

}  // namespace oracle
