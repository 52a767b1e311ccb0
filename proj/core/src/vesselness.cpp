#include "fundval/vesselness.hpp"

#include <algorithm>
#include <cmath>

#include "fundval/error.hpp"
#include "fundval/filter.hpp"
#include "fundval/parallel.hpp"

namespace fundval::vessel {

ScaleSet::ScaleSet(std::vector<double> sigmas, double alpha)
    : sigmas_(std::move(sigmas)), alpha_(alpha) {
    if (sigmas_.empty()) throw ArgumentError("ScaleSet: at least one scale required");
    for (std::size_t i = 0; i < sigmas_.size(); ++i) {
        if (!(sigmas_[i] > 0.0) || !std::isfinite(sigmas_[i])) {
            throw ArgumentError("ScaleSet: scales must be positive");
        }
        if (i > 0 && !(sigmas_[i] > sigmas_[i - 1])) {
            throw ArgumentError("ScaleSet: scales must be strictly increasing");
        }
    }
    if (!std::isfinite(alpha_)) throw ArgumentError("ScaleSet: alpha must be finite");
}

ScaleSet ScaleSet::defaults() { return ScaleSet({1.0, 2.0, 3.0}); }

HessianEigenvalues hessian_eigenvalues(const img::GrayImage& image, double sigma) {
    const img::GrayImage hxx = img::gaussian_derivative(image, sigma, 2, 0);
    const img::GrayImage hxy = img::gaussian_derivative(image, sigma, 1, 1);
    const img::GrayImage hyy = img::gaussian_derivative(image, sigma, 0, 2);

    const double s2 = sigma * sigma;
    HessianEigenvalues ev{img::GrayImage(image.width, image.height),
                          img::GrayImage(image.width, image.height)};
    for (std::size_t i = 0; i < image.data.size(); ++i) {
        const double a = s2 * hxx.data[i];
        const double b = s2 * hxy.data[i];
        const double c = s2 * hyy.data[i];
        const double half_trace = 0.5 * (a + c);
        const double half_diff = 0.5 * (a - c);
        const double root = std::sqrt(half_diff * half_diff + b * b);
        ev.lambda1.data[i] = half_trace - root;
        ev.lambda2.data[i] = half_trace + root;
    }
    return ev;
}

namespace {

img::GrayImage scale_response(const img::GrayImage& inverted, double sigma, double alpha) {
    const HessianEigenvalues ev = hessian_eigenvalues(inverted, sigma);
    img::GrayImage r(inverted.width, inverted.height);
    for (std::size_t i = 0; i < r.data.size(); ++i) {
        const double l1 = ev.lambda1.data[i];
        const double l2 = ev.lambda2.data[i];
        const double m = std::min(l1 + alpha * l2, l2 + alpha * l1);
        r.data[i] = m < 0.0 ? -m : 0.0;
    }
    return r;
}

}  // namespace

VesselnessMap meijering_vesselness(const img::GrayImage& image, const ScaleSet& scales,
                                   bool normalize) {
    if (image.width < 2 || image.height < 2) {
        throw ArgumentError("meijering_vesselness: image must be at least 2x2");
    }
    img::GrayImage inverted(image.width, image.height);
    for (std::size_t i = 0; i < image.data.size(); ++i) inverted.data[i] = 1.0 - image.data[i];

    const auto& sigmas = scales.sigmas();
    std::vector<img::GrayImage> per_scale(sigmas.size());
    parallel_for(0, sigmas.size(), [&](std::size_t s) {
        per_scale[s] = scale_response(inverted, sigmas[s], scales.alpha());
    });

    VesselnessMap map{per_scale.front(), normalize};
    for (std::size_t s = 1; s < per_scale.size(); ++s) {
        for (std::size_t i = 0; i < map.response.data.size(); ++i) {
            map.response.data[i] = std::max(map.response.data[i], per_scale[s].data[i]);
        }
    }
    if (normalize) {
        const double peak = *std::max_element(map.response.data.begin(), map.response.data.end());
        if (peak > 0.0) {
            for (double& v : map.response.data) v = std::min(v / peak, 1.0);
        }
    }
    return map;
}

double vesselness_rms_distance(const VesselnessMap& a, const VesselnessMap& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ArgumentError("vesselness maps differ in size");
    }
    const std::size_t n = a.response.data.size();
    if (n == 0) throw ArgumentError("empty vesselness map");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a.response.data[i] - b.response.data[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(n));
}

double edge_loss(const img::RasterImage& a, const img::RasterImage& b, const ScaleSet& scales,
                 bool normalize) {
    if (a.width != b.width || a.height != b.height) {
        throw ArgumentError("edge_loss: image dimensions differ");
    }
    if (a.channels != b.channels) throw ArgumentError("edge_loss: channel counts differ");
    const VesselnessMap va = meijering_vesselness(img::green_channel(a), scales, normalize);
    const VesselnessMap vb = meijering_vesselness(img::green_channel(b), scales, normalize);
    return vesselness_rms_distance(va, vb);
}

}  // namespace fundval::vessel
