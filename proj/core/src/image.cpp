#include "fundval/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "fundval/error.hpp"

namespace fundval::img {

namespace {

void check_dims(int w, int h) {
    if (w < 0 || h < 0) throw ArgumentError("image dimensions must be non-negative");
}

// Sample position and blend weight along one axis for half-pixel-centred
// bilinear interpolation.
struct Tap {
    int lo;
    int hi;
    double t;
};

std::vector<Tap> axis_taps(int in_n, int out_n) {
    std::vector<Tap> taps(static_cast<std::size_t>(out_n));
    const double scale = static_cast<double>(in_n) / out_n;
    for (int o = 0; o < out_n; ++o) {
        double src = (o + 0.5) * scale - 0.5;
        src = std::clamp(src, 0.0, static_cast<double>(in_n - 1));
        const int lo = static_cast<int>(std::floor(src));
        const int hi = std::min(lo + 1, in_n - 1);
        taps[static_cast<std::size_t>(o)] = {lo, hi, src - lo};
    }
    return taps;
}

double lerp_exact(double a, double b, double t) {
    // Keeps a constant input constant and stays inside [min(a,b), max(a,b)].
    if (a == b) return a;
    const double v = a + t * (b - a);
    return std::clamp(v, std::min(a, b), std::max(a, b));
}

}  // namespace

GrayImage::GrayImage(int w, int h, double fill) : width(w), height(h) {
    check_dims(w, h);
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

GrayImage::GrayImage(int w, int h, std::vector<double> values)
    : width(w), height(h), data(std::move(values)) {
    check_dims(w, h);
    if (data.size() != static_cast<std::size_t>(w) * h) {
        throw ArgumentError("GrayImage: data length does not match width*height");
    }
}

RasterImage::RasterImage(int w, int h, int c, double fill) : width(w), height(h), channels(c) {
    check_dims(w, h);
    if (c != 1 && c != 3) throw ArgumentError("RasterImage: channels must be 1 or 3");
    data.assign(static_cast<std::size_t>(w) * h * c, fill);
}

RasterImage::RasterImage(int w, int h, int c, std::vector<double> values)
    : width(w), height(h), channels(c), data(std::move(values)) {
    check_dims(w, h);
    if (c != 1 && c != 3) throw ArgumentError("RasterImage: channels must be 1 or 3");
    if (data.size() != static_cast<std::size_t>(w) * h * c) {
        throw ArgumentError("RasterImage: data length does not match width*height*channels");
    }
}

RasterImage RasterImage::from_gray(const GrayImage& g) {
    return RasterImage(g.width, g.height, 1, g.data);
}

GrayImage green_channel(const RasterImage& img) {
    if (img.channels == 1) return GrayImage(img.width, img.height, img.data);
    if (img.channels != 3) throw ArgumentError("green_channel: expected 1 or 3 channels");
    GrayImage out(img.width, img.height);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) out.data[i] = img.data[i * 3 + 1];
    return out;
}

GrayImage green_channel(const GrayImage& img) { return img; }

GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw ArgumentError("resize_bilinear: target size must be >= 1");
    if (img.empty()) throw ArgumentError("resize_bilinear: empty input image");
    if (out_w == img.width && out_h == img.height) return img;

    const auto xs = axis_taps(img.width, out_w);
    const auto ys = axis_taps(img.height, out_h);
    GrayImage out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        const Tap& ty = ys[static_cast<std::size_t>(y)];
        for (int x = 0; x < out_w; ++x) {
            const Tap& tx = xs[static_cast<std::size_t>(x)];
            const double top = lerp_exact(img.at(tx.lo, ty.lo), img.at(tx.hi, ty.lo), tx.t);
            const double bot = lerp_exact(img.at(tx.lo, ty.hi), img.at(tx.hi, ty.hi), tx.t);
            out.at(x, y) = lerp_exact(top, bot, ty.t);
        }
    }
    return out;
}

RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw ArgumentError("resize_bilinear: target size must be >= 1");
    if (img.data.empty()) throw ArgumentError("resize_bilinear: empty input image");
    if (out_w == img.width && out_h == img.height) return img;

    RasterImage out(out_w, out_h, img.channels);
    GrayImage plane(img.width, img.height);
    for (int c = 0; c < img.channels; ++c) {
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            plane.data[i] = img.data[i * img.channels + c];
        }
        const GrayImage r = resize_bilinear(plane, out_w, out_h);
        for (std::size_t i = 0; i < r.data.size(); ++i) {
            out.data[i * img.channels + c] = r.data[i];
        }
    }
    return out;
}

GrayImage rotate90(const GrayImage& img) {
    GrayImage out(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out.at(img.height - 1 - y, x) = img.at(x, y);
        }
    }
    return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path.string());
}

RasterImage read_image(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return decode_image(bytes, detect_format(bytes));
}

void write_image(const std::filesystem::path& path, const RasterImage& img) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    ImageFormat fmt;
    if (ext == ".png") {
        fmt = ImageFormat::Png;
    } else if (ext == ".pgm") {
        fmt = ImageFormat::Pgm;
    } else {
        throw UnsupportedFormatError("unsupported output extension: " + ext);
    }
    const auto bytes = encode_image(img, fmt);
    write_file_bytes(path, bytes);
}

void write_image(const std::filesystem::path& path, const GrayImage& img) {
    write_image(path, RasterImage::from_gray(img));
}

}  // namespace fundval::img
