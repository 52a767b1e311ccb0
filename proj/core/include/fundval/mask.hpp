#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fundval/image.hpp"

namespace fundval::morph {

/// Boolean raster, row-major; true marks structure.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false);

    [[nodiscard]] bool at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v = true) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    /// Out-of-frame pixels read as background.
    [[nodiscard]] bool get_or_background(int x, int y) const {
        return x >= 0 && y >= 0 && x < width && y < height && at(x, y);
    }
    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] bool empty_foreground() const { return count() == 0; }

    bool operator==(const BinaryMask&) const = default;
};

/// Foreground where the first channel exceeds 127/255.
BinaryMask mask_from_image(const img::RasterImage& image);
BinaryMask read_mask(const std::filesystem::path& path);
img::GrayImage mask_to_image(const BinaryMask& m);

/// 8-connected components; each returned mask holds one component, ordered
/// by the raster position of their first pixel.
std::vector<BinaryMask> connected_components(const BinaryMask& m);

BinaryMask rotate90(const BinaryMask& m);
BinaryMask translate(const BinaryMask& m, int dx, int dy);

}  // namespace fundval::morph
