#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fundval/error.hpp"
#include "fundval/mask.hpp"
#include "fundval/morphology.hpp"
#include "fundval/phantom.hpp"
#include "oracles.hpp"

using namespace fundval;
using namespace fundval::morph;

namespace {

BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double p) {
    BinaryMask m(w, h);
    for (auto& v : m.data) v = oracle::uniform01(rng) < p ? 1 : 0;
    return m;
}

bool subset(const BinaryMask& a, const BinaryMask& b) {
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (a.data[i] && !b.data[i]) return false;
    return true;
}

BinaryMask fundus_vessels() {
    phantom::CohortOptions opts;
    opts.count = 1;
    return phantom::make_cohort(opts).front().vessel;
}

}  // namespace

TEST_SUITE("morphology") {

TEST_CASE("distance transform examples") {
    BinaryMask one(9, 9);
    one.set(4, 4);
    CHECK(euclidean_distance_transform(one).at(4, 4) == 1.0);

    BinaryMask strip(21, 40);
    for (int y = 0; y < 40; ++y)
        for (int x = 8; x < 13; ++x) strip.set(x, y);
    const auto d = euclidean_distance_transform(strip);
    CHECK(d.at(10, 20) == 3.0);
    CHECK(d.at(9, 20) == 2.0);
    CHECK(d.at(11, 20) == 2.0);
    CHECK(d.at(8, 20) == 1.0);
    CHECK(d.at(12, 20) == 1.0);
    CHECK(d.at(3, 20) == 0.0);
}

TEST_CASE("distance transform equals the brute-force scan") {
    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = random_mask(rng, 64, 64, 0.3 + 0.6 * oracle::uniform01(rng));
        const auto ours = euclidean_distance_transform(m);
        const auto ref = oracle::edt(m);
        double worst = 0.0;
        for (std::size_t i = 0; i < ours.data.size(); ++i) worst = std::max(worst, std::abs(ours.data[i] - ref.data[i]));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("skeleton examples") {
    CHECK(skeletonize(BinaryMask(10, 10)) == BinaryMask(10, 10));
    const auto line = phantom::horizontal_strip(40, 9, 1, 5);
    CHECK(skeletonize(line) == line);

    const auto bar = phantom::horizontal_strip(60, 15, 5, 5);
    const auto sk = skeletonize(bar);
    for (int x = 15; x < 45; ++x) {
        int n = 0;
        for (int y = 0; y < 15; ++y) n += sk.at(x, y);
        CHECK(n == 1);
        CHECK(sk.at(x, 7));
    }
}

TEST_CASE("skeleton is a subset and keeps components connected") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        BinaryMask m(64, 64);
        for (int s = 0; s < 3; ++s) {
            phantom::draw_segment(m, 64 * oracle::uniform01(rng), 64 * oracle::uniform01(rng), 64 * oracle::uniform01(rng),
                                  64 * oracle::uniform01(rng), 1.0 + 2.0 * oracle::uniform01(rng));
        }
        const auto sk = skeletonize(m);
        CHECK(subset(sk, m));
        const auto comps = connected_components(m);
        for (const auto& c : comps) {
            BinaryMask part(64, 64);
            for (std::size_t i = 0; i < part.data.size(); ++i) part.data[i] = c.data[i] && sk.data[i];
            CHECK(connected_components(part).size() == 1);
        }
    }
    const auto v = fundus_vessels();
    CHECK(subset(skeletonize(v), v));
}

TEST_CASE("width statistics") {
    const auto empty = vessel_width_stats(BinaryMask(20, 20));
    CHECK(empty.mean_width == 0.0);
    CHECK(empty.skeleton_pixels == 0);

    const auto w3 = vessel_width_stats(phantom::horizontal_strip(80, 21, 3, 10));
    CHECK(w3.mean_width == 3.0);
    CHECK(w3.std_width == 0.0);
    CHECK(vessel_width_stats(phantom::horizontal_strip(80, 21, 1, 10)).mean_width == 1.0);

    BinaryMask pair(140, 60);
    for (int x = 20; x < 120; ++x) {
        for (int y = 14; y < 17; ++y) pair.set(x, y);
        for (int y = 38; y < 43; ++y) pair.set(x, y);
    }
    const auto ws = vessel_width_stats(pair);
    CHECK(std::abs(ws.mean_width - 4.0) < 0.2);
}

TEST_CASE("width statistics are translation invariant") {
    BinaryMask m(128, 128);
    phantom::draw_segment(m, 30, 30, 90, 70, 2.0);
    phantom::draw_segment(m, 40, 90, 95, 35, 1.2);
    const auto base = vessel_width_stats(m);
    for (const auto& [dx, dy] : std::vector<std::pair<int, int>>{{5, 0}, {0, -7}, {-12, 9}, {20, 17}}) {
        const auto moved = vessel_width_stats(translate(m, dx, dy));
        CHECK(moved.mean_width == base.mean_width);
        CHECK(moved.skeleton_pixels == base.skeleton_pixels);
    }
}

TEST_CASE("vessel density") {
    CHECK(vessel_density(BinaryMask(10, 10, true)) == 1.0);
    CHECK(vessel_density(phantom::filled_square(20, 10)) == 0.25);
    const auto m = read_mask(std::filesystem::path(FUNDVAL_DATA_DIR) / "real/masks/real000_vessel.png");
    std::size_t n = 0;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) n += m.at(x, y);
    CHECK(vessel_density(m) == static_cast<double>(n) / (m.width * m.height));
}

TEST_CASE("fractal dimension of known shapes") {
    CHECK(std::abs(fractal_dimension(phantom::line_mask(512, 512, 0, 256, 511, 256)) - 1.0) < 0.1);
    CHECK(std::abs(fractal_dimension(phantom::filled_square(512, 512)) - 2.0) < 0.1);
    const double sierpinski = fractal_dimension(phantom::sierpinski_triangle(6, 729));
    CHECK(std::abs(sierpinski - std::log(3.0) / std::log(2.0)) < 0.05);
    CHECK_THROWS_AS(fractal_dimension(BinaryMask(64, 64)), ArgumentError);
    CHECK_THROWS_AS(fractal_dimension(BinaryMask(16, 16, true)), ArgumentError);
}

TEST_CASE("box counts use origin-anchored power-of-two boxes") {
    BinaryMask m(32, 32);
    m.set(0, 0);
    m.set(31, 31);
    const auto counts = box_counts(m);
    REQUIRE(counts.size() == 3);
    CHECK(counts[0].box_size == 2);
    CHECK(counts[2].box_size == 8);
    for (const auto& c : counts) CHECK(c.occupied == 2);
}

TEST_CASE("fractal dimension is stable under rotation") {
    auto m = fundus_vessels();
    const double fd = fractal_dimension(m);
    for (int k = 0; k < 3; ++k) {
        m = rotate90(m);
        CHECK(std::abs(fractal_dimension(m) - fd) <= 0.02);
    }
}

TEST_CASE("disc and cup geometry") {
    const auto circle = phantom::filled_disc(64, 64, 32, 32, 10);
    const auto g = disc_cup_geometry(circle, BinaryMask(64, 64));
    CHECK(g.disc_height == 21);
    CHECK(g.disc_width == 21);
    CHECK_FALSE(g.cup_height.has_value());
    CHECK_FALSE(g.vertical_cup_disc_ratio.has_value());

    BinaryMask disc(80, 80), cup(80, 80);
    for (int y = 20; y < 60; ++y)
        for (int x = 30; x < 50; ++x) disc.set(x, y);
    for (int y = 30; y < 50; ++y)
        for (int x = 35; x < 45; ++x) cup.set(x, y);
    CHECK(disc_cup_geometry(disc, cup).vertical_cup_disc_ratio.value() == 0.5);
    CHECK_THROWS_AS(disc_cup_geometry(BinaryMask(8, 8), cup), ArgumentError);

    for (const auto& [a, b] : std::vector<std::pair<int, int>>{{7, 3}, {12, 20}, {5, 5}}) {
        BinaryMask e(64, 64);
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) {
                const double u = (x - 32.0) / a, v = (y - 30.0) / b;
                if (u * u + v * v <= 1.0) e.set(x, y);
            }
        const auto eg = disc_cup_geometry(e, BinaryMask(64, 64));
        CHECK(eg.disc_width == 2 * a + 1);
        CHECK(eg.disc_height == 2 * b + 1);
    }
}

TEST_CASE("knudtson combination") {
    const std::vector<double> two = {4.0, 4.0};
    CHECK(knudtson_combine(two, 0.88) == doctest::Approx(0.88 * 4.0 * std::numbers::sqrt2).epsilon(1e-14));

    const std::vector<double> same(6, 3.0);
    const double c = 0.88;
    CHECK(knudtson_combine(same, c) == doctest::Approx(oracle::knudtson_six(same, c)).epsilon(1e-14));
    CHECK(knudtson_combine(same, c) == doctest::Approx(c * c * 3.0 * std::sqrt(4 * c * c + 2)).epsilon(1e-14));

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(6), v(6);
        for (auto& x : a) x = 5.0 + 15.0 * oracle::uniform01(rng);
        for (auto& x : v) x = 5.0 + 20.0 * oracle::uniform01(rng);
        CHECK(knudtson_combine(a, 0.88) == doctest::Approx(oracle::knudtson_six(a, 0.88)).epsilon(1e-13));

        const auto eq = vascular_equivalents(a, v);
        CHECK(eq.avr == eq.crae / eq.crve);
        const auto dual = vascular_equivalents(a, a);
        CHECK(dual.avr == doctest::Approx(oracle::knudtson_six(a, 0.88) / oracle::knudtson_six(a, 0.95)).epsilon(1e-13));

        std::vector<double> pa = a, pv = v;
        std::shuffle(pa.begin(), pa.end(), rng);
        std::shuffle(pv.begin(), pv.end(), rng);
        const auto perm = vascular_equivalents(pa, pv);
        CHECK(perm.crae == eq.crae);
        CHECK(perm.crve == eq.crve);

        const double t = 0.5 + 2.0 * oracle::uniform01(rng);
        for (auto& x : pa) x *= t;
        for (auto& x : pv) x *= t;
        const auto scaled = vascular_equivalents(pa, pv);
        CHECK(scaled.crae == doctest::Approx(t * eq.crae).epsilon(1e-12));
        CHECK(scaled.crve == doctest::Approx(t * eq.crve).epsilon(1e-12));
        CHECK(scaled.avr == doctest::Approx(eq.avr).epsilon(1e-12));
    }
    const std::vector<double> five(5, 1.0), bad = {1, 2, 3, 4, 5, 0};
    CHECK_THROWS_AS(vascular_equivalents(five, same), ArgumentError);
    CHECK_THROWS_AS(vascular_equivalents(same, bad), ArgumentError);
}

TEST_CASE("feature rows") {
    phantom::CohortOptions opts;
    opts.count = 2;
    const auto cohort = phantom::make_cohort(opts);
    const auto& s = cohort.front();
    const MaskBundle full{s.vessel, s.artery, s.vein, s.disc, s.cup};
    const auto row = extract_feature_row(full);
    for (const auto& v : row.values()) CHECK(v.has_value());
    CHECK(*row.avr == *row.crae / *row.crve);
    CHECK(*row.vessel_density >= 0.0);
    CHECK(*row.vessel_density <= 1.0);
    CHECK(extract_feature_row(full) == row);

    const auto vessel_only = extract_feature_row(MaskBundle{s.vessel, {}, {}, {}, {}});
    CHECK(vessel_only.vessel_density.has_value());
    CHECK(vessel_only.fractal_dimension.has_value());
    CHECK(vessel_only.mean_vessel_width.has_value());
    CHECK_FALSE(vessel_only.disc_height.has_value());
    CHECK_FALSE(vessel_only.vertical_cup_disc_ratio.has_value());
    CHECK_FALSE(vessel_only.crae.has_value());
    CHECK_FALSE(vessel_only.avr.has_value());

    const BinaryMask blank(64, 64);
    CHECK_THROWS_AS(extract_feature_row(MaskBundle{blank, blank, blank, blank, blank}), ArgumentError);
}

TEST_CASE("six widest components come back in descending order") {
    BinaryMask m(200, 200);
    const std::vector<double> half = {0.6, 1.1, 1.6, 2.1, 2.6, 3.1, 0.6};
    for (std::size_t i = 0; i < half.size(); ++i) {
        const double y = 15.0 + 25.0 * i;
        phantom::draw_segment(m, 20, y, 180, y, half[i]);
    }
    const auto w = six_widest_component_widths(m);
    REQUIRE(w.size() == 6);
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] <= w[i - 1]);
    CHECK_THROWS_AS(six_widest_component_widths(phantom::filled_square(50, 10)), ArgumentError);
}

}  // TEST_SUITE
