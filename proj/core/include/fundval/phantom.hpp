#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fundval/image.hpp"
#include "fundval/mask.hpp"

// Synthetic test images and masks with known geometry.
namespace fundval::phantom {

/// Bright background (1.0) with a dark vertical line of the given width
/// (value 0.0) centred horizontally.
img::GrayImage line_image(int width, int height, int line_width);

morph::BinaryMask filled_square(int size, int side);
morph::BinaryMask horizontal_strip(int width, int height, int strip_width, int margin);
morph::BinaryMask filled_disc(int width, int height, double cx, double cy, double radius);
/// One-pixel straight line between two points (Bresenham).
morph::BinaryMask line_mask(int width, int height, int x0, int y0, int x1, int y1);
/// Filled Sierpinski triangle of the given order on a size x size canvas:
/// the right triangle (0,size), (size,size), (0,0) is subdivided order times
/// and every pixel whose centre lies in a remaining triangle is set.
morph::BinaryMask sierpinski_triangle(int order, int size);

/// Thick straight segment from (x0,y0) to (x1,y1): pixels whose centre lies
/// within half_width of the segment.
void draw_segment(morph::BinaryMask& m, double x0, double y0, double x1, double y1, double half_width);

struct SubjectTraits {
    double age = 50.0;
    int sex = 0;
};

struct FundusSample {
    std::string id;
    SubjectTraits traits;
    img::RasterImage image;  // RGB
    morph::BinaryMask vessel;
    morph::BinaryMask artery;
    morph::BinaryMask vein;
    morph::BinaryMask disc;
    morph::BinaryMask cup;
    Eigen::VectorXd embedding;
};

struct CohortOptions {
    int count = 16;
    int size = 256;
    std::uint64_t seed = 1;
    std::string id_prefix = "s";
    /// Multiplies every vessel width; 1 reproduces the reference cohort.
    double width_scale = 1.0;
    /// Gaussian pixel noise added to the RGB image.
    double noise = 0.01;
    int embedding_dim = 8;
};

/// Fundus-like images whose vessel calibre and disc size follow the subject
/// traits, with six arteriole and six venule segments each.
std::vector<FundusSample> make_cohort(const CohortOptions& opts);

/// Writes images, masks, embeddings.fef, targets.csv and manifest.csv into dir.
void write_cohort(const std::filesystem::path& dir, const std::vector<FundusSample>& cohort);

/// Writes real/ and synth/ cohorts plus config.json under root.
void write_demo_dataset(const std::filesystem::path& root, int per_group = 16, int size = 256,
                        std::uint64_t seed = 2024);

}  // namespace fundval::phantom
