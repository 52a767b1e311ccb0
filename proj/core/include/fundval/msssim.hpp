#pragma once

#include <vector>

#include "fundval/image.hpp"

namespace fundval::metrics {

struct MsssimParams {
    int levels = 5;
    int window = 11;
    double window_sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

/// Standard five-scale exponents (Wang, Simoncelli & Bovik).
inline constexpr double kMsssimWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

struct MsssimTerms {
    std::vector<double> contrast_structure;  // one per level, finest first
    double luminance = 1.0;                  // coarsest level only
    std::vector<double> weights;             // exponents actually used
    double value = 1.0;
};

/// Per-level terms and their weighted product. SSIM statistics use an
/// 11x11 Gaussian window (sigma 1.5) over the valid region; levels are
/// separated by 2x2 average pooling. Negative terms keep their sign when
/// raised to the level exponent, so the result lies in [-1, 1].
/// For fewer than five levels the leading weights are renormalized to sum 1.
MsssimTerms msssim_terms(const img::GrayImage& a, const img::GrayImage& b,
                         const MsssimParams& params = {});

double msssim(const img::GrayImage& a, const img::GrayImage& b, int levels = 5);

/// 2x2 average pooling; odd trailing rows/columns are dropped.
img::GrayImage downsample2(const img::GrayImage& in);

}  // namespace fundval::metrics
