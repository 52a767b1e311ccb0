#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <string>

#include "fundval/error.hpp"
#include "fundval/image.hpp"

namespace fundval::img {

namespace {

constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint8_t quantize8(double v) {
    if (!(v > 0.0)) return 0;  // also maps NaN to 0
    if (v >= 1.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw DecodeError(std::string("PNG decode failed: ") + image.message);
    }
    const auto original = image.format;
    if (original & PNG_FORMAT_FLAG_COLORMAP) {
        png_image_free(&image);
        throw UnsupportedFormatError("palette PNG images are not supported");
    }
    if (original & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw UnsupportedFormatError("16-bit PNG images are not supported");
    }
    if (original & PNG_FORMAT_FLAG_ALPHA) {
        png_image_free(&image);
        throw UnsupportedFormatError("PNG images with alpha are not supported");
    }
    const int channels = (original & PNG_FORMAT_FLAG_COLOR) ? 3 : 1;
    image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw DecodeError("PNG decode failed: " + msg);
    }
    RasterImage out(static_cast<int>(image.width), static_cast<int>(image.height), channels);
    for (std::size_t i = 0; i < pixels.size(); ++i) out.data[i] = pixels[i] / 255.0;
    return out;
}

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    std::vector<std::uint8_t> pixels(img.data.size());
    std::transform(img.data.begin(), img.data.end(), pixels.begin(), quantize8);

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
        throw IoError(std::string("PNG encode failed: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
        throw IoError(std::string("PNG encode failed: ") + image.message);
    }
    out.resize(size);
    return out;
}

// Netpbm header token reader: skips whitespace and '#' comments.
class PgmHeader {
public:
    explicit PgmHeader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    long next_int() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw DecodeError("PGM header: expected integer");
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > (1L << 30)) throw DecodeError("PGM header: value out of range");
            ++pos_;
        }
        return v;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw DecodeError("PGM header: missing separator before raster");
        }
        return pos_ + 1;
    }

    void expect_magic() {
        if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] != '5') {
            throw DecodeError("PGM: missing P5 magic");
        }
        pos_ = 2;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

RasterImage decode_pgm(std::span<const std::uint8_t> bytes) {
    PgmHeader header(bytes);
    header.expect_magic();
    const long w = header.next_int();
    const long h = header.next_int();
    const long maxval = header.next_int();
    if (w < 1 || h < 1) throw DecodeError("PGM: zero dimension");
    if (maxval < 1) throw DecodeError("PGM: invalid maxval");
    if (maxval > 255) throw UnsupportedFormatError("16-bit PGM images are not supported");
    const std::size_t offset = header.raster_offset();
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() < offset + n) throw DecodeError("PGM: truncated raster");

    RasterImage out(static_cast<int>(w), static_cast<int>(h), 1);
    const double scale = static_cast<double>(maxval);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t v = bytes[offset + i];
        if (v > maxval) throw DecodeError("PGM: sample exceeds maxval");
        out.data[i] = maxval == 255 ? v / 255.0 : v / scale;
    }
    return out;
}

std::vector<std::uint8_t> encode_pgm(const RasterImage& img) {
    if (img.channels != 1) throw ArgumentError("PGM output requires a single-channel image");
    const std::string header =
        "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + img.data.size());
    for (double v : img.data) out.push_back(quantize8(v));
    return out;
}

}  // namespace

ImageFormat detect_format(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 8 && std::equal(std::begin(kPngMagic), std::end(kPngMagic), bytes.begin())) {
        return ImageFormat::Png;
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return ImageFormat::Pgm;
    throw DecodeError("unrecognised image signature (expected PNG or binary PGM)");
}

RasterImage decode_image(std::span<const std::uint8_t> bytes, ImageFormat format) {
    switch (format) {
        case ImageFormat::Png:
            return decode_png(bytes);
        case ImageFormat::Pgm:
            return decode_pgm(bytes);
    }
    throw ArgumentError("decode_image: unknown format");
}

std::vector<std::uint8_t> encode_image(const RasterImage& img, ImageFormat format) {
    if (img.width < 1 || img.height < 1) throw ArgumentError("encode_image: empty image");
    switch (format) {
        case ImageFormat::Png:
            return encode_png(img);
        case ImageFormat::Pgm:
            return encode_pgm(img);
    }
    throw ArgumentError("encode_image: unknown format");
}

}  // namespace fundval::img
