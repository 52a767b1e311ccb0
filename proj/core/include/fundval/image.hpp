#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fundval::img {

/// Single-channel floating-point image, row-major. Values are unbounded
/// once filtered; decoded images stay in [0,1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0);
    GrayImage(int w, int h, std::vector<double> values);

    [[nodiscard]] std::size_t size() const { return data.size(); }
    [[nodiscard]] bool empty() const { return data.empty(); }

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    [[nodiscard]] double at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }

    bool operator==(const GrayImage&) const = default;
};

/// Decoded image with 1 or 3 interleaved channels, row-major, values in [0,1].
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> data;

    RasterImage() = default;
    RasterImage(int w, int h, int c, double fill = 0.0);
    RasterImage(int w, int h, int c, std::vector<double> values);

    static RasterImage from_gray(const GrayImage& g);

    [[nodiscard]] std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * height;
    }
    double& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    [[nodiscard]] double at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool operator==(const RasterImage&) const = default;
};

/// Green plane of an RGB image; a 1-channel image is returned unchanged.
GrayImage green_channel(const RasterImage& img);
GrayImage green_channel(const GrayImage& img);

// Bilinear resampling with half-pixel centres (align-corners = false),
// clamping sample coordinates at the border.
GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h);
RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h);

/// 90 degree clockwise rotation: out(H-1-y, x) = in(x, y).
GrayImage rotate90(const GrayImage& img);

enum class ImageFormat { Png, Pgm };

/// Decodes an 8-bit PNG (gray or RGB) or binary PGM (P5).
/// Throws DecodeError on malformed input, UnsupportedFormatError on
/// 16-bit, palette or alpha images.
RasterImage decode_image(std::span<const std::uint8_t> bytes, ImageFormat format);

/// Sniffs the magic bytes; throws DecodeError if neither PNG nor P5.
ImageFormat detect_format(std::span<const std::uint8_t> bytes);

/// Quantizes to 8 bits (round(v*255), clamped). PGM requires one channel.
std::vector<std::uint8_t> encode_image(const RasterImage& img, ImageFormat format);

RasterImage read_image(const std::filesystem::path& path);
/// Format chosen from the extension (.png or .pgm).
void write_image(const std::filesystem::path& path, const RasterImage& img);
void write_image(const std::filesystem::path& path, const GrayImage& img);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace fundval::img
