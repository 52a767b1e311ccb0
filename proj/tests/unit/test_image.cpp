#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "fundval/csv.hpp"
#include "fundval/embedding.hpp"
#include "fundval/error.hpp"
#include "fundval/filter.hpp"
#include "fundval/image.hpp"
#include "fundval/parallel.hpp"
#include "oracles.hpp"

using namespace fundval;
using namespace fundval::img;

namespace {
std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

GrayImage random_gray(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GrayImage g(w, h);
    for (double& v : g.data) v = oracle::uniform01(rng);
    return g;
}
}  // namespace

TEST_SUITE("imgcore") {

TEST_CASE("pgm decode scales by 255") {
    std::string pgm = "P5\n# comment line\n2 2\n255\n";
    pgm += static_cast<char>(0);
    pgm += static_cast<char>(128);
    pgm += static_cast<char>(255);
    pgm += static_cast<char>(64);
    const auto img = decode_image(bytes_of(pgm), ImageFormat::Pgm);
    CHECK(img.channels == 1);
    CHECK(img.width == 2);
    CHECK(img.data == std::vector<double>{0.0, 128.0 / 255.0, 1.0, 64.0 / 255.0});
    CHECK(detect_format(bytes_of(pgm)) == ImageFormat::Pgm);
}

TEST_CASE("malformed and unsupported inputs") {
    CHECK_THROWS_AS(decode_image(bytes_of("P5\n2 2\n255\n\x01"), ImageFormat::Pgm), DecodeError);
    CHECK_THROWS_AS(decode_image(bytes_of("P5\n1 1\n65535\n\x01\x02"), ImageFormat::Pgm), UnsupportedFormatError);
    CHECK_THROWS_AS(decode_image(bytes_of("P2\n1 1\n255\n1"), ImageFormat::Pgm), DecodeError);
    CHECK_THROWS_AS(detect_format(bytes_of("GIF89a")), DecodeError);
    CHECK_THROWS_AS(decode_image(bytes_of("\x89PNG\r\n\x1a\nxxxx"), ImageFormat::Png), DecodeError);
}

TEST_CASE("one pixel red png") {
    RasterImage red(1, 1, 3);
    red.data = {1.0, 0.0, 0.0};
    const auto png = encode_image(red, ImageFormat::Png);
    CHECK(detect_format(png) == ImageFormat::Png);
    const auto back = decode_image(png, ImageFormat::Png);
    CHECK(back.channels == 3);
    CHECK(back.data == std::vector<double>{1.0, 0.0, 0.0});
}

TEST_CASE("bundled phantom png round-trips bit-identically") {
    const auto path = std::filesystem::path(FUNDVAL_DATA_DIR) / "real/images/real000.png";
    const auto first = read_image(path);
    CHECK(first.width == 256);
    CHECK(first.channels == 3);
    const auto again = decode_image(encode_image(first, ImageFormat::Png), ImageFormat::Png);
    CHECK(again == first);
    const auto gray = RasterImage::from_gray(green_channel(first));
    CHECK(decode_image(encode_image(gray, ImageFormat::Pgm), ImageFormat::Pgm) == gray);
}

TEST_CASE("green channel") {
    RasterImage px(1, 1, 3);
    px.data = {0.2, 0.7, 0.1};
    CHECK(green_channel(px).data[0] == 0.7);

    const auto img = read_image(std::filesystem::path(FUNDVAL_DATA_DIR) / "synth/images/gen003.png");
    const auto g = green_channel(img);
    bool all = true;
    for (std::size_t i = 0; i < g.data.size(); ++i) all = all && g.data[i] == img.data[3 * i + 1];
    CHECK(all);
    CHECK(green_channel(g) == g);
    CHECK(green_channel(RasterImage::from_gray(g)) == g);
}

TEST_CASE("bilinear resize") {
    const GrayImage two(2, 1, std::vector<double>{0.0, 1.0});
    CHECK(resize_bilinear(two, 4, 1).data == std::vector<double>{0.0, 0.25, 0.75, 1.0});

    const auto r = random_gray(13, 7, 5);
    CHECK(resize_bilinear(r, 13, 7) == r);

    const GrayImage c(9, 5, 0.3);
    const auto up = resize_bilinear(c, 31, 17);
    for (double v : up.data) CHECK(v == 0.3);

    CHECK_THROWS_AS(resize_bilinear(r, 0, 3), ArgumentError);
}

TEST_CASE("resize stays within the input range") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = random_gray(11 + static_cast<int>(seed), 9, seed);
        const double lo = *std::min_element(r.data.begin(), r.data.end());
        const double hi = *std::max_element(r.data.begin(), r.data.end());
        for (auto [w, h] : {std::pair{5, 3}, std::pair{40, 29}, std::pair{17, 9}}) {
            const auto o = resize_bilinear(r, w, h);
            for (double v : o.data) {
                CHECK(v >= lo);
                CHECK(v <= hi);
            }
        }
    }
}

TEST_CASE("rotate90 four times is the identity") {
    const auto r = random_gray(7, 4, 9);
    const auto once = rotate90(r);
    CHECK(once.width == 4);
    CHECK(once.height == 7);
    CHECK(once.at(3, 0) == r.at(0, 0));
    CHECK(rotate90(rotate90(rotate90(once))) == r);
}

TEST_CASE("derivative kernels satisfy their moment constraints") {
    for (double sigma : {0.7, 1.0, 2.0, 3.5}) {
        for (int order = 0; order <= 2; ++order) {
            const auto k = make_derivative_kernel(sigma, order);
            CHECK(k.radius() == static_cast<int>(std::ceil(4 * sigma)));
            const auto full = k.full();
            double m0 = 0, m1 = 0, m2 = 0;
            for (int j = -k.radius(); j <= k.radius(); ++j) {
                const double w = full[static_cast<std::size_t>(j + k.radius())];
                m0 += w;
                m1 += j * w;
                m2 += j * j * w;
            }
            if (order == 0) CHECK(m0 == doctest::Approx(1.0).epsilon(1e-14));
            if (order == 1) {
                CHECK(std::abs(m0) < 1e-14);
                CHECK(m1 == doctest::Approx(1.0).epsilon(1e-14));
            }
            if (order == 2) {
                CHECK(std::abs(m0) < 1e-14);
                CHECK(m2 == doctest::Approx(2.0).epsilon(1e-14));
            }
        }
    }
    CHECK_THROWS_AS(make_derivative_kernel(0.0, 0), ArgumentError);
}

TEST_CASE("gaussian derivative of constants, ramps and quadratics") {
    const GrayImage c(24, 20, 0.37);
    CHECK(gaussian_derivative(c, 1.5, 0, 0) == c);
    for (auto [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{2, 0}, std::pair{1, 1}, std::pair{0, 2}}) {
        const auto d = gaussian_derivative(c, 1.5, dx, dy);
        for (double v : d.data) CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(gaussian_derivative(c, -1.0, 1, 0), ArgumentError);
    CHECK_THROWS_AS(gaussian_derivative(c, 1.0, 2, 1), ArgumentError);

    for (double sigma : {0.8, 1.0, 2.0, 3.0}) {
        GrayImage ramp(64, 40);
        for (int y = 0; y < ramp.height; ++y)
            for (int x = 0; x < ramp.width; ++x) ramp.at(x, y) = x;
        const auto d = gaussian_derivative(ramp, sigma, 1, 0);
        const int r = static_cast<int>(std::ceil(4 * sigma));
        for (int y = 0; y < ramp.height; ++y)
            for (int x = r; x < ramp.width - r; ++x) CHECK(d.at(x, y) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("parallel_for visits every index once for any worker count") {
    for (unsigned t : {1u, 2u, 3u, 8u, 0u}) {
        set_thread_count(t);
        std::vector<int> hits(1001, 0);
        parallel_for(0, hits.size(), [&](std::size_t i) { hits[i] += 1; });
        CHECK(std::count(hits.begin(), hits.end(), 1) == 1001);
    }
    set_thread_count(3);
    CHECK_THROWS_AS(parallel_for(0, 10, [](std::size_t i) { if (i == 7) throw ArgumentError("x"); }), ArgumentError);
    set_thread_count(0);
}

TEST_CASE("fef round trip and malformed input") {
    std::mt19937_64 rng(3);
    const Eigen::MatrixXd m = oracle::normal_matrix(rng, 5, 3);
    const auto bytes = metrics::encode_fef(m);
    CHECK(bytes.size() == 12 + 5 * 3 * 4);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "FEF1");
    CHECK(bytes[4] == 5);
    CHECK(bytes[8] == 3);
    const Eigen::MatrixXd back = metrics::decode_fef(bytes);
    CHECK(back.rows() == 5);
    CHECK(back.isApprox(m.cast<float>().cast<double>(), 0.0));
    auto truncated = bytes;
    truncated.pop_back();
    CHECK_THROWS_AS(metrics::decode_fef(truncated), DecodeError);
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(metrics::decode_fef(bad), DecodeError);
}

TEST_CASE("csv quoting and missing cells") {
    const auto t = parse_csv("id,name,v\n1,\"a, b\",\n2,\"say \"\"hi\"\"\",3.5\n");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == "a, b");
    CHECK(t.rows[1][1] == "say \"hi\"");
    CHECK_FALSE(parse_cell(t.rows[0][2]).has_value());
    CHECK(*parse_cell(t.rows[1][2]) == 3.5);
    CHECK_THROWS(parse_cell("abc"));
    CHECK(parse_csv(format_csv(t)).rows == t.rows);
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345678.9}) CHECK(*parse_cell(format_double(v)) == v);
}

}  // TEST_SUITE
