#pragma once

#include <vector>

#include "fundval/image.hpp"

namespace fundval::img {

/// One-sided taps of a symmetric (order 0, 2) or antisymmetric (order 1)
/// sampled Gaussian-derivative kernel. taps[0] is the offset-1 weight;
/// the centre weight is implied by the moment constraints:
///   order 0: full kernel sums to 1
///   order 1: sum_j j*k(j) = 1   (unit response to a ramp)
///   order 2: zero sum and sum_j j^2*k(j) = 2   (unit response to x^2/2)
/// The radius is ceil(4*sigma).
struct DerivativeKernel {
    int order = 0;
    double sigma = 1.0;
    std::vector<double> taps;

    [[nodiscard]] int radius() const { return static_cast<int>(taps.size()); }
    /// Full 2r+1 correlation weights, index r is the centre.
    [[nodiscard]] std::vector<double> full() const;
};

DerivativeKernel make_derivative_kernel(double sigma, int order);

/// Mirror index (reflect-101: ... c b | a b c ... ) into [0, n).
int reflect_index(int i, int n);

/// Separable Gaussian-derivative filtering of order (dx, dy), dx + dy <= 2,
/// with reflect-101 boundaries. Both pass orders are evaluated and averaged
/// so that 90 degree rotations of the input commute bit-exactly with the
/// filter. A constant image maps to itself under (0,0) and to exact zero
/// under every derivative order.
GrayImage gaussian_derivative(const GrayImage& img, double sigma, int dx, int dy);

}  // namespace fundval::img
