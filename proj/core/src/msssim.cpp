#include "fundval/msssim.hpp"

#include <cmath>
#include <numeric>

#include "fundval/error.hpp"

namespace fundval::metrics {

namespace {

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> w(static_cast<std::size_t>(size));
    const double c = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double x = i - c;
        w[static_cast<std::size_t>(i)] = std::exp(-(x * x) / (2.0 * sigma * sigma));
        sum += w[static_cast<std::size_t>(i)];
    }
    for (double& v : w) v /= sum;
    return w;
}

// Valid-region separable correlation.
img::GrayImage filter_valid(const img::GrayImage& in, const std::vector<double>& w) {
    const int k = static_cast<int>(w.size());
    const int ow = in.width - k + 1;
    const int oh = in.height - k + 1;
    img::GrayImage tmp(ow, in.height);
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i) acc += w[static_cast<std::size_t>(i)] * in.at(x + i, y);
            tmp.at(x, y) = acc;
        }
    }
    img::GrayImage out(ow, oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i) acc += w[static_cast<std::size_t>(i)] * tmp.at(x, y + i);
            out.at(x, y) = acc;
        }
    }
    return out;
}

img::GrayImage product(const img::GrayImage& a, const img::GrayImage& b) {
    img::GrayImage out(a.width, a.height);
    for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] * b.data[i];
    return out;
}

struct LevelStats {
    double cs;
    double luminance;
};

// Mean contrast-structure and luminance terms over the valid window positions.
// Every expression is written symmetrically in (a, b) so swapping operands
// reproduces the result bit for bit.
LevelStats level_stats(const img::GrayImage& a, const img::GrayImage& b,
                       const std::vector<double>& w, double c1, double c2) {
    const img::GrayImage mu_a = filter_valid(a, w);
    const img::GrayImage mu_b = filter_valid(b, w);
    const img::GrayImage e_aa = filter_valid(product(a, a), w);
    const img::GrayImage e_bb = filter_valid(product(b, b), w);
    const img::GrayImage e_ab = filter_valid(product(a, b), w);

    double cs_sum = 0.0;
    double l_sum = 0.0;
    const std::size_t n = mu_a.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double ma = mu_a.data[i];
        const double mb = mu_b.data[i];
        const double var_a = e_aa.data[i] - ma * ma;
        const double var_b = e_bb.data[i] - mb * mb;
        const double cov = e_ab.data[i] - ma * mb;
        cs_sum += (2.0 * cov + c2) / ((var_a + var_b) + c2);
        l_sum += (2.0 * ma * mb + c1) / ((ma * ma + mb * mb) + c1);
    }
    return {cs_sum / static_cast<double>(n), l_sum / static_cast<double>(n)};
}

double signed_pow(double base, double exponent) {
    return base < 0.0 ? -std::pow(-base, exponent) : std::pow(base, exponent);
}

}  // namespace

img::GrayImage downsample2(const img::GrayImage& in) {
    img::GrayImage out(in.width / 2, in.height / 2);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            out.at(x, y) = 0.25 * ((in.at(2 * x, 2 * y) + in.at(2 * x + 1, 2 * y)) +
                                   (in.at(2 * x, 2 * y + 1) + in.at(2 * x + 1, 2 * y + 1)));
        }
    }
    return out;
}

MsssimTerms msssim_terms(const img::GrayImage& a, const img::GrayImage& b, const MsssimParams& p) {
    if (a.width != b.width || a.height != b.height) {
        throw ArgumentError("msssim: image dimensions differ");
    }
    if (p.levels < 1 || p.levels > 5) throw ArgumentError("msssim: levels must be in 1..5");
    if (p.window < 1 || !(p.window_sigma > 0.0)) throw ArgumentError("msssim: invalid window");
    const long min_side = static_cast<long>(p.window) << (p.levels - 1);
    if (std::min(a.width, a.height) < min_side) {
        throw ArgumentError("msssim: image too small for " + std::to_string(p.levels) +
                            " levels (need min side >= " + std::to_string(min_side) + ")");
    }

    MsssimTerms terms;
    const double wsum = std::accumulate(kMsssimWeights, kMsssimWeights + p.levels, 0.0);
    for (int l = 0; l < p.levels; ++l) {
        terms.weights.push_back(p.levels == 5 ? kMsssimWeights[l] : kMsssimWeights[l] / wsum);
    }

    const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
    const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
    const auto window = gaussian_window(p.window, p.window_sigma);

    img::GrayImage la = a;
    img::GrayImage lb = b;
    double value = 1.0;
    for (int l = 0; l < p.levels; ++l) {
        const LevelStats s = level_stats(la, lb, window, c1, c2);
        terms.contrast_structure.push_back(s.cs);
        const double weight = terms.weights[static_cast<std::size_t>(l)];
        if (l + 1 == p.levels) {
            terms.luminance = s.luminance;
            value *= signed_pow(s.cs * s.luminance, weight);
        } else {
            value *= signed_pow(s.cs, weight);
            la = downsample2(la);
            lb = downsample2(lb);
        }
    }
    terms.value = value;
    return terms;
}

double msssim(const img::GrayImage& a, const img::GrayImage& b, int levels) {
    MsssimParams p;
    p.levels = levels;
    return msssim_terms(a, b, p).value;
}

}  // namespace fundval::metrics
