#include <doctest.h>

#include <cmath>
#include <random>

#include "fundval/error.hpp"
#include "fundval/filter.hpp"
#include "fundval/mask.hpp"
#include "fundval/phantom.hpp"
#include "fundval/vesselness.hpp"
#include "oracles.hpp"

using namespace fundval;
using vessel::ScaleSet;

namespace {

struct LineStats {
    double line_mean;
    double background_mean;
};

LineStats line_stats(const img::GrayImage& response, int line_width) {
    const int x0 = (response.width - line_width) / 2;
    double on = 0, off = 0;
    int n_on = 0, n_off = 0;
    for (int y = 0; y < response.height; ++y) {
        for (int x = 0; x < response.width; ++x) {
            if (x >= x0 && x < x0 + line_width) {
                on += response.at(x, y);
                ++n_on;
            } else {
                off += response.at(x, y);
                ++n_off;
            }
        }
    }
    return {on / n_on, off / n_off};
}

img::GrayImage random_segments(std::mt19937_64& rng, int size) {
    morph::BinaryMask m(size, size);
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) {
        phantom::draw_segment(m, oracle::uniform01(rng) * size, oracle::uniform01(rng) * size,
                              oracle::uniform01(rng) * size, oracle::uniform01(rng) * size,
                              0.5 + 2.0 * oracle::uniform01(rng));
    }
    img::GrayImage g(size, size, 0.9);
    for (std::size_t i = 0; i < g.data.size(); ++i) {
        if (m.data[i]) g.data[i] = 0.2;
        g.data[i] += 0.02 * oracle::normal(rng);
    }
    return g;
}

double rms(const img::GrayImage& a, const img::GrayImage& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += (a.data[i] - b.data[i]) * (a.data[i] - b.data[i]);
    return std::sqrt(s / a.data.size());
}

}  // namespace

TEST_SUITE("vesselness") {

TEST_CASE("scale set validation") {
    CHECK(ScaleSet::defaults().sigmas() == std::vector<double>{1, 2, 3});
    CHECK(ScaleSet::defaults().alpha() == doctest::Approx(-1.0 / 3.0));
    CHECK_THROWS_AS(ScaleSet({}), ArgumentError);
    CHECK_THROWS_AS(ScaleSet({2, 1}), ArgumentError);
    CHECK_THROWS_AS(ScaleSet({0, 1}), ArgumentError);
    CHECK_THROWS_AS(ScaleSet({1, 1}), ArgumentError);
}

TEST_CASE("hessian eigenvalues") {
    const img::GrayImage c(20, 20, 0.5);
    const auto e = vessel::hessian_eigenvalues(c, 2.0);
    for (std::size_t i = 0; i < c.data.size(); ++i) {
        CHECK(e.lambda1.data[i] == 0.0);
        CHECK(e.lambda2.data[i] == 0.0);
    }

    // Paraboloid: the finite-difference Hessian is 2I everywhere.
    const double sigma = 1.5;
    img::GrayImage p(40, 40);
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x) p.at(x, y) = (x - 20.0) * (x - 20.0) + (y - 20.0) * (y - 20.0);
    const auto ep = vessel::hessian_eigenvalues(p, sigma);
    for (int y = 8; y < 32; ++y) {
        for (int x = 8; x < 32; ++x) {
            const double fd = p.at(x + 1, y) - 2 * p.at(x, y) + p.at(x - 1, y);
            CHECK(ep.lambda1.at(x, y) == doctest::Approx(sigma * sigma * fd).epsilon(1e-9));
            CHECK(ep.lambda2.at(x, y) == doctest::Approx(sigma * sigma * fd).epsilon(1e-9));
        }
    }

    std::mt19937_64 rng(11);
    img::GrayImage r(33, 29);
    for (double& v : r.data) v = oracle::uniform01(rng);
    for (double s : {1.0, 2.5}) {
        const auto er = vessel::hessian_eigenvalues(r, s);
        const auto hxx = img::gaussian_derivative(r, s, 2, 0);
        const auto hyy = img::gaussian_derivative(r, s, 0, 2);
        for (std::size_t i = 0; i < r.data.size(); ++i) {
            CHECK(er.lambda1.data[i] <= er.lambda2.data[i]);
            CHECK(std::abs(er.lambda1.data[i] + er.lambda2.data[i] - s * s * (hxx.data[i] + hyy.data[i])) < 1e-10);
        }
    }
}

TEST_CASE("constant image gives an all-zero map") {
    const auto m = vessel::meijering_vesselness(img::GrayImage(32, 32, 0.6), ScaleSet::defaults());
    for (double v : m.response.data) CHECK(v == 0.0);
    CHECK_THROWS_AS(vessel::meijering_vesselness(img::GrayImage(1, 1, 0.5), ScaleSet::defaults()), ArgumentError);
}

TEST_CASE("dark line responds far above background") {
    const auto line = phantom::line_image(256, 256, 3);
    const auto m = vessel::meijering_vesselness(line, ScaleSet::defaults());
    const auto s = line_stats(m.response, 3);
    CHECK(s.line_mean > 5.0 * s.background_mean);
    for (double v : m.response.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(*std::max_element(m.response.data.begin(), m.response.data.end()) == 1.0);
}

TEST_CASE("90 degree rotation commutes with the filter") {
    std::mt19937_64 rng(4);
    const auto img0 = random_segments(rng, 64);
    for (bool normalize : {false, true}) {
        const auto rotated_map = img::rotate90(vessel::meijering_vesselness(img0, ScaleSet::defaults(), normalize).response);
        const auto map_of_rotated = vessel::meijering_vesselness(img::rotate90(img0), ScaleSet::defaults(), normalize).response;
        const int band = 12;
        int mismatches = 0;
        for (int y = band; y < 64 - band; ++y)
            for (int x = band; x < 64 - band; ++x) mismatches += rotated_map.at(x, y) != map_of_rotated.at(x, y);
        CHECK(mismatches == 0);
    }
}

TEST_CASE("argmax set is invariant under affine intensity changes") {
    const auto line = phantom::line_image(96, 96, 3);
    auto argmax_set = [](const img::GrayImage& r) {
        const double top = *std::max_element(r.data.begin(), r.data.end());
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < r.data.size(); ++i)
            if (r.data[i] >= top * (1 - 1e-12)) idx.push_back(i);
        return idx;
    };
    const auto base = argmax_set(vessel::meijering_vesselness(line, ScaleSet::defaults()).response);
    CHECK_FALSE(base.empty());
    for (auto [a, b] : {std::pair{2.0, -0.5}, std::pair{0.3, 0.1}, std::pair{0.7, 0.25}}) {
        img::GrayImage t = line;
        for (double& v : t.data) v = a * v + b;
        CHECK(argmax_set(vessel::meijering_vesselness(t, ScaleSet::defaults()).response) == base);
    }
}

TEST_CASE("ridge dominance survives one percent salt and pepper noise") {
    auto line = phantom::line_image(256, 256, 3);
    std::mt19937_64 rng(2024);
    for (double& v : line.data) {
        const double u = oracle::uniform01(rng);
        if (u < 0.005) v = 0.0;
        else if (u < 0.01) v = 1.0;
    }
    const auto s = line_stats(vessel::meijering_vesselness(line, ScaleSet::defaults()).response, 3);
    CHECK(s.line_mean > 2.0 * s.background_mean);
}

TEST_CASE("edge loss identity, symmetry and composition") {
    const auto line = img::RasterImage::from_gray(phantom::line_image(64, 64, 3));
    const auto blank = img::RasterImage::from_gray(img::GrayImage(64, 64, 1.0));
    const auto sc = ScaleSet::defaults();
    CHECK(vessel::edge_loss(line, line, sc) == 0.0);
    CHECK(vessel::edge_loss(line, blank, sc) == vessel::edge_loss(blank, line, sc));
    const auto ma = vessel::meijering_vesselness(img::green_channel(line), sc).response;
    const auto mb = vessel::meijering_vesselness(img::green_channel(blank), sc).response;
    CHECK(std::abs(vessel::edge_loss(line, blank, sc) - rms(ma, mb)) < 1e-10);
    CHECK_THROWS_AS(vessel::edge_loss(line, img::RasterImage::from_gray(img::GrayImage(32, 64, 1.0)), sc),
                    ArgumentError);
}

TEST_CASE("un-normalized edge loss obeys the triangle inequality") {
    std::mt19937_64 rng(99);
    const auto sc = ScaleSet::defaults();
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = img::RasterImage::from_gray(random_segments(rng, 40));
        const auto b = img::RasterImage::from_gray(random_segments(rng, 40));
        const auto c = img::RasterImage::from_gray(random_segments(rng, 40));
        const double ab = vessel::edge_loss(a, b, sc, false);
        const double bc = vessel::edge_loss(b, c, sc, false);
        const double ac = vessel::edge_loss(a, c, sc, false);
        CHECK(ac <= ab + bc + 1e-12);
        CHECK(ab == vessel::edge_loss(b, a, sc, false));
    }
}

}  // TEST_SUITE
