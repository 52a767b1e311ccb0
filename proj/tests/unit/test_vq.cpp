#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fundval/error.hpp"
#include "fundval/parallel.hpp"
#include "fundval/vq.hpp"
#include "oracles.hpp"

using namespace fundval;
using namespace fundval::vq;

TEST_SUITE("vq") {

TEST_CASE("exact codebook entries quantize to themselves") {
    std::mt19937_64 rng(3);
    const Eigen::MatrixXd e = oracle::normal_matrix(rng, 8, 4);
    const Codebook cb(e);
    Eigen::MatrixXd z(6, 4);
    const std::vector<int> pick = {3, 0, 7, 7, 1, 5};
    for (int i = 0; i < 6; ++i) z.row(i) = e.row(pick[i]);
    const auto r = quantize(LatentGrid(2, 3, z), cb);
    CHECK(std::vector<int>(r.indices.begin(), r.indices.end()) == pick);
    CHECK(r.codebook_loss == 0.0);
    CHECK(r.commitment_loss == 0.0);
}

TEST_CASE("ties go to the lowest index") {
    Eigen::MatrixXd e(6, 1);
    e << 10, 11, -1, 12, 13, 1;
    Eigen::MatrixXd z(1, 1);
    z << 0.0;
    CHECK(quantize(LatentGrid(1, 1, z), Codebook(e)).indices[0] == 2);
    CHECK(quantize(LatentGrid(1, 1, z), Codebook(e), 0.25, DistanceRoute::Expanded).indices[0] == 2);
}

TEST_CASE("one dimensional loss terms") {
    Eigen::MatrixXd e(2, 1), z(1, 1);
    e << 0.0, 3.0;
    z << 1.0;
    const auto r = quantize(LatentGrid(1, 1, z), Codebook(e), 0.25);
    CHECK(r.indices[0] == 0);
    CHECK(r.codebook_loss == 1.0);
    CHECK(r.commitment_loss == 0.25);
    CHECK(r.perplexity == 1.0);
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(quantize(LatentGrid(1, 1, Eigen::MatrixXd::Zero(1, 3)), Codebook(Eigen::MatrixXd::Zero(2, 2))),
                    ArgumentError);
    CHECK_THROWS_AS(LatentGrid(2, 2, Eigen::MatrixXd::Zero(3, 2)), ArgumentError);
    CHECK_THROWS_AS(Codebook(Eigen::MatrixXd(0, 2)), ArgumentError);
    const std::vector<std::int32_t> bad = {0, 3};
    CHECK_THROWS_AS(perplexity(bad, 3), ArgumentError);
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(2, 2);
    CHECK_THROWS_AS(kmeans_codebook(metrics::EmbeddingSet(pts), 3, 5, 1), ArgumentError);
}

TEST_CASE("full-size grid agrees with an exhaustive scan") {
    std::mt19937_64 rng(32);
    const Eigen::MatrixXd e = oracle::normal_matrix(rng, 512, 128);
    const Eigen::MatrixXd z = oracle::normal_matrix(rng, 32 * 32, 128);
    const Codebook cb(e);
    const LatentGrid grid(32, 32, z);
    const auto direct = quantize(grid, cb);
    const auto expanded = quantize(grid, cb, 0.25, DistanceRoute::Expanded);
    int mismatches = 0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const int want = oracle::nearest_code(z.row(i), e);
        if (direct.indices[i] != want) ++mismatches;
        CHECK(direct.quantized.vectors().row(i) == e.row(direct.indices[i]));
    }
    CHECK(mismatches == 0);
    CHECK(direct.indices == expanded.indices);
    CHECK(std::abs(direct.codebook_loss - expanded.codebook_loss) <= 1e-6 * direct.codebook_loss);
    CHECK(direct.perplexity >= 1.0);
    CHECK(direct.perplexity <= 512.0);
}

TEST_CASE("assignment is optimal and idempotent") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd e = oracle::normal_matrix(rng, 7, 3);
        const Eigen::MatrixXd z = oracle::normal_matrix(rng, 12, 3);
        const Codebook cb(e);
        const auto r = quantize(LatentGrid(3, 4, z), cb);
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            const double best = (z.row(i) - r.quantized.vectors().row(i)).squaredNorm();
            for (Eigen::Index k = 0; k < e.rows(); ++k) CHECK(best <= (z.row(i) - e.row(k)).squaredNorm());
        }
        const auto again = quantize(r.quantized, cb);
        CHECK(again.indices == r.indices);
        CHECK(again.codebook_loss == 0.0);
        CHECK(again.commitment_loss == 0.0);
    }
}

TEST_CASE("perplexity") {
    const std::vector<std::int32_t> one = {4, 4, 4, 4};
    CHECK(perplexity(one, 8) == 1.0);
    std::vector<std::int32_t> uniform;
    for (int k = 0; k < 16; ++k) uniform.push_back(k);
    CHECK(perplexity(uniform, 16) == doctest::Approx(16.0).epsilon(1e-12));
    const std::vector<std::int32_t> skewed = {0, 0, 1, 2};
    CHECK(perplexity(skewed, 3) == doctest::Approx(std::exp(1.5 * std::log(2.0))).epsilon(1e-12));
    CHECK(std::abs(perplexity(skewed, 3) - 2.8284) < 1e-4);
}

TEST_CASE("k-means on distinct points and blobs") {
    Eigen::MatrixXd pts(4, 2);
    pts << 0, 0, 5, 1, -3, 2, 8, 8;
    const auto exact = kmeans_codebook(metrics::EmbeddingSet(pts), 4, 10, 1);
    CHECK(exact.inertia.back() == 0.0);
    for (int i = 0; i < 4; ++i) {
        bool found = false;
        for (int k = 0; k < 4; ++k) found |= exact.codebook.entries().row(k) == pts.row(i);
        CHECK(found);
    }

    std::mt19937_64 rng(2);
    Eigen::MatrixXd blobs(400, 2);
    for (int i = 0; i < 400; ++i) {
        const double cx = i < 200 ? -5.0 : 5.0;
        const double cy = i < 200 ? 0.0 : 3.0;
        blobs(i, 0) = cx + 0.5 * oracle::normal(rng);
        blobs(i, 1) = cy + 0.5 * oracle::normal(rng);
    }
    const Eigen::RowVector2d m0 = blobs.topRows(200).colwise().mean();
    const Eigen::RowVector2d m1 = blobs.bottomRows(200).colwise().mean();
    const auto fit = kmeans_codebook(metrics::EmbeddingSet(blobs), 2, 50, 7);
    const auto& c = fit.codebook.entries();
    const bool order = c(0, 0) < c(1, 0);
    CHECK((c.row(order ? 0 : 1) - m0).norm() < 0.1);
    CHECK((c.row(order ? 1 : 0) - m1).norm() < 0.1);
}

TEST_CASE("k-means inertia never increases and is reproducible") {
    std::mt19937_64 rng(9);
    const Eigen::MatrixXd x = oracle::normal_matrix(rng, 300, 5);
    const metrics::EmbeddingSet set(x);
    const auto a = kmeans_codebook(set, 16, 30, 123);
    for (std::size_t i = 1; i < a.inertia.size(); ++i) CHECK(a.inertia[i] <= a.inertia[i - 1]);
    const auto b = kmeans_codebook(set, 16, 30, 123);
    CHECK(a.codebook.entries() == b.codebook.entries());
    set_thread_count(4);
    const auto c = kmeans_codebook(set, 16, 30, 123);
    set_thread_count(0);
    CHECK(a.codebook.entries() == c.codebook.entries());
    CHECK(a.inertia == c.inertia);
}

}  // TEST_SUITE
