#pragma once

#include <vector>

#include "fundval/image.hpp"

namespace fundval::vessel {

/// Scales (pixels) and eigenvalue mixing coefficient of the Meijering filter.
class ScaleSet {
public:
    static constexpr double kDefaultAlpha = -1.0 / 3.0;

    /// Throws ArgumentError unless sigmas is non-empty, strictly increasing
    /// and positive.
    explicit ScaleSet(std::vector<double> sigmas, double alpha = kDefaultAlpha);

    /// {1, 2, 3} pixels, suited to 256x256 fundus images.
    static ScaleSet defaults();

    [[nodiscard]] const std::vector<double>& sigmas() const { return sigmas_; }
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double max_sigma() const { return sigmas_.back(); }

private:
    std::vector<double> sigmas_;
    double alpha_;
};

/// Per-pixel ridge response. Normalized maps lie in [0,1].
struct VesselnessMap {
    img::GrayImage response;
    bool normalized = true;

    [[nodiscard]] int width() const { return response.width; }
    [[nodiscard]] int height() const { return response.height; }
};

struct HessianEigenvalues {
    img::GrayImage lambda1;  // smaller (signed)
    img::GrayImage lambda2;  // larger (signed)
};

/// Eigenvalues of the scale-normalized Hessian sigma^2 [Hxx Hxy; Hxy Hyy].
HessianEigenvalues hessian_eigenvalues(const img::GrayImage& img, double sigma);

/// Meijering neuriteness on a green-channel image. Dark vessels are
/// inverted into bright ridges; per scale the response is
/// max(-min(l1 + a*l2, l2 + a*l1), 0), maximised over scales. With
/// normalize=true the map is divided by its global maximum.
VesselnessMap meijering_vesselness(const img::GrayImage& img, const ScaleSet& scales,
                                   bool normalize = true);

/// RMS difference of the green-channel vesselness maps of two images.
double edge_loss(const img::RasterImage& a, const img::RasterImage& b, const ScaleSet& scales,
                 bool normalize = true);

/// RMS difference of two precomputed maps.
double vesselness_rms_distance(const VesselnessMap& a, const VesselnessMap& b);

}  // namespace fundval::vessel
