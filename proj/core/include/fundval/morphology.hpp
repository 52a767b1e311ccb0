#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fundval/image.hpp"
#include "fundval/mask.hpp"

namespace fundval::morph {

/// Zhang-Suen thinning iterated to a fixpoint. Pixels outside the frame
/// count as background.
BinaryMask skeletonize(const BinaryMask& mask);

/// Exact Euclidean distance from each foreground pixel to the nearest
/// background pixel, the frame border counting as background. Background
/// pixels map to 0. Separable lower-envelope-of-parabolas algorithm.
img::GrayImage euclidean_distance_transform(const BinaryMask& mask);

struct WidthStats {
    double mean_width = 0.0;
    double std_width = 0.0;  // population standard deviation
    std::size_t skeleton_pixels = 0;
};

/// Width 2*EDT - 1 sampled on the skeleton.
WidthStats vessel_width_stats(const BinaryMask& mask);

/// Fraction of frame pixels that are vessel.
double vessel_density(const BinaryMask& mask);

struct BoxCount {
    int box_size;
    std::size_t occupied;
};

/// Box-counting counts for sizes 2^1 .. 2^floor(log2(min(W,H)/4)) on an
/// origin-anchored grid.
std::vector<BoxCount> box_counts(const BinaryMask& mask);

/// Least-squares slope of ln N(s) against ln(1/s).
double fractal_dimension(const BinaryMask& mask);

struct DiscCupGeometry {
    int disc_height = 0;
    int disc_width = 0;
    std::optional<int> cup_height;
    std::optional<int> cup_width;
    std::optional<double> vertical_cup_disc_ratio;
};

/// Tight bounding boxes; an empty cup leaves the cup fields unset.
DiscCupGeometry disc_cup_geometry(const BinaryMask& disc, const BinaryMask& cup);

inline constexpr double kArterioleCoefficient = 0.88;
inline constexpr double kVenuleCoefficient = 0.95;

/// Iterative Knudtson combination of branch widths: each round sorts,
/// merges largest with smallest as c*sqrt(a^2 + b^2), and carries the
/// median forward when the count is odd.
double knudtson_combine(std::span<const double> widths, double coefficient);

struct VascularEquivalents {
    double crae = 0.0;
    double crve = 0.0;
    double avr = 0.0;
};

/// Six positive widths per vessel class.
VascularEquivalents vascular_equivalents(std::span<const double> arteriole_widths,
                                         std::span<const double> venule_widths);

/// Per-image feature vector. Features whose inputs are absent stay empty.
struct RetinalFeatureRow {
    std::optional<double> vessel_density;
    std::optional<double> fractal_dimension;
    std::optional<double> mean_vessel_width;
    std::optional<double> disc_height;
    std::optional<double> disc_width;
    std::optional<double> cup_height;
    std::optional<double> cup_width;
    std::optional<double> vertical_cup_disc_ratio;
    std::optional<double> crae;
    std::optional<double> crve;
    std::optional<double> avr;

    static const std::array<std::string, 11>& names();
    [[nodiscard]] std::array<std::optional<double>, 11> values() const;
    bool operator==(const RetinalFeatureRow&) const = default;
};

struct MaskBundle {
    BinaryMask vessel;
    std::optional<BinaryMask> artery;
    std::optional<BinaryMask> vein;
    std::optional<BinaryMask> disc;
    std::optional<BinaryMask> cup;
};

/// Mean widths of the six widest 8-connected components, descending.
/// Throws ArgumentError with fewer than six components.
std::vector<double> six_widest_component_widths(const BinaryMask& mask);

/// Throws ArgumentError if every supplied mask is empty.
RetinalFeatureRow extract_feature_row(const MaskBundle& masks);

}  // namespace fundval::morph
