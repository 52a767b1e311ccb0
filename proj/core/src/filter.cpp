#include "fundval/filter.hpp"

#include <cmath>

#include "fundval/error.hpp"

namespace fundval::img {

DerivativeKernel make_derivative_kernel(double sigma, int order) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ArgumentError("gaussian kernel: sigma must be positive");
    }
    if (order < 0 || order > 2) throw ArgumentError("gaussian kernel: order must be 0, 1 or 2");

    const int r = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> g(static_cast<std::size_t>(r) + 1);
    for (int j = 0; j <= r; ++j) g[static_cast<std::size_t>(j)] = std::exp(-(j * j) / (2.0 * sigma * sigma));

    DerivativeKernel k;
    k.order = order;
    k.sigma = sigma;
    k.taps.resize(static_cast<std::size_t>(r));

    if (order == 0) {
        double z = g[0];
        for (int j = 1; j <= r; ++j) z += 2.0 * g[static_cast<std::size_t>(j)];
        for (int j = 1; j <= r; ++j) k.taps[static_cast<std::size_t>(j - 1)] = g[static_cast<std::size_t>(j)] / z;
    } else if (order == 1) {
        double m = 0.0;
        for (int j = 1; j <= r; ++j) m += 2.0 * j * j * g[static_cast<std::size_t>(j)];
        for (int j = 1; j <= r; ++j) k.taps[static_cast<std::size_t>(j - 1)] = j * g[static_cast<std::size_t>(j)] / m;
    } else {
        // Sampled second derivative (j^2 - m2) g(j) with m2 the discrete
        // second moment, which makes the kernel sum exactly to zero.
        double z = g[0];
        double m2 = 0.0;
        for (int j = 1; j <= r; ++j) {
            z += 2.0 * g[static_cast<std::size_t>(j)];
            m2 += 2.0 * j * j * g[static_cast<std::size_t>(j)];
        }
        m2 /= z;
        double norm = 0.0;
        for (int j = 1; j <= r; ++j) {
            const double w = (j * j - m2) * g[static_cast<std::size_t>(j)];
            k.taps[static_cast<std::size_t>(j - 1)] = w;
            norm += static_cast<double>(j) * j * w;
        }
        for (auto& t : k.taps) t /= norm;
    }
    return k;
}

std::vector<double> DerivativeKernel::full() const {
    const int r = radius();
    std::vector<double> w(static_cast<std::size_t>(2 * r + 1), 0.0);
    double side = 0.0;
    for (int j = 1; j <= r; ++j) {
        const double t = taps[static_cast<std::size_t>(j - 1)];
        if (order == 1) {
            w[static_cast<std::size_t>(r + j)] = t;
            w[static_cast<std::size_t>(r - j)] = -t;
        } else {
            w[static_cast<std::size_t>(r + j)] = t;
            w[static_cast<std::size_t>(r - j)] = t;
            side += 2.0 * t;
        }
    }
    if (order == 0) w[static_cast<std::size_t>(r)] = 1.0 - side;
    if (order == 2) w[static_cast<std::size_t>(r)] = -side;
    return w;
}

int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

namespace {

// Filters one line held in a reflect-padded buffer: line[r + x] is sample x.
// Symmetric kernels use centred differences a + b - 2v so that constants
// pass through untouched (order 0) or vanish exactly (order 2).
void filter_line(const std::vector<double>& line, int n, const DerivativeKernel& k,
                 double* out, std::size_t stride) {
    const int r = k.radius();
    const double* taps = k.taps.data();
    for (int x = 0; x < n; ++x) {
        const double* c = line.data() + r + x;
        double acc = 0.0;
        if (k.order == 1) {
            for (int j = 1; j <= r; ++j) acc += taps[j - 1] * (c[j] - c[-j]);
        } else {
            const double v2 = 2.0 * c[0];
            for (int j = 1; j <= r; ++j) acc += taps[j - 1] * ((c[j] + c[-j]) - v2);
            if (k.order == 0) acc += c[0];
        }
        out[static_cast<std::size_t>(x) * stride] = acc;
    }
}

GrayImage pass_x(const GrayImage& in, const DerivativeKernel& k) {
    const int r = k.radius();
    GrayImage out(in.width, in.height);
    std::vector<double> line(static_cast<std::size_t>(in.width + 2 * r));
    for (int y = 0; y < in.height; ++y) {
        for (int i = -r; i < in.width + r; ++i) {
            line[static_cast<std::size_t>(i + r)] = in.at(reflect_index(i, in.width), y);
        }
        filter_line(line, in.width, k, &out.at(0, y), 1);
    }
    return out;
}

GrayImage pass_y(const GrayImage& in, const DerivativeKernel& k) {
    const int r = k.radius();
    GrayImage out(in.width, in.height);
    std::vector<double> line(static_cast<std::size_t>(in.height + 2 * r));
    for (int x = 0; x < in.width; ++x) {
        for (int i = -r; i < in.height + r; ++i) {
            line[static_cast<std::size_t>(i + r)] = in.at(x, reflect_index(i, in.height));
        }
        filter_line(line, in.height, k, &out.at(x, 0), static_cast<std::size_t>(in.width));
    }
    return out;
}

}  // namespace

GrayImage gaussian_derivative(const GrayImage& img, double sigma, int dx, int dy) {
    if (!(sigma > 0.0)) throw ArgumentError("gaussian_derivative: sigma must be > 0");
    if (dx < 0 || dy < 0 || dx + dy > 2) {
        throw ArgumentError("gaussian_derivative: derivative orders must satisfy dx+dy <= 2");
    }
    if (img.empty()) throw ArgumentError("gaussian_derivative: empty image");

    const DerivativeKernel kx = make_derivative_kernel(sigma, dx);
    const DerivativeKernel ky = dx == dy ? kx : make_derivative_kernel(sigma, dy);

    const GrayImage xy = pass_y(pass_x(img, kx), ky);
    const GrayImage yx = pass_x(pass_y(img, ky), kx);
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = 0.5 * (xy.data[i] + yx.data[i]);
    return out;
}

}  // namespace fundval::img
