#include <benchmark/benchmark.h>

#include <random>

#include "fundval/mmd.hpp"
#include "fundval/morphology.hpp"
#include "fundval/msssim.hpp"
#include "fundval/phantom.hpp"
#include "fundval/vesselness.hpp"
#include "fundval/vq.hpp"

using namespace fundval;

namespace {

Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(rng);
    return m;
}

void BM_Vesselness(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto img = phantom::line_image(n, n, 3);
    const auto scales = vessel::ScaleSet::defaults();
    for (auto _ : state) benchmark::DoNotOptimize(vessel::meijering_vesselness(img, scales));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Vesselness)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Msssim(benchmark::State& state) {
    std::mt19937_64 rng(1);
    img::GrayImage a(256, 256), b(256, 256);
    std::uniform_real_distribution<double> u;
    for (auto& v : a.data) v = u(rng);
    for (auto& v : b.data) v = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(metrics::msssim(a, b));
}
BENCHMARK(BM_Msssim)->Unit(benchmark::kMillisecond);

void BM_Quantize(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const vq::Codebook cb(gaussian(rng, 512, 128));
    const vq::LatentGrid z(32, 32, gaussian(rng, 1024, 128));
    const auto route = state.range(0) == 0 ? vq::DistanceRoute::Direct : vq::DistanceRoute::Expanded;
    for (auto _ : state) benchmark::DoNotOptimize(vq::quantize(z, cb, 0.25, route));
}
BENCHMARK(BM_Quantize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Mmd(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const auto n = state.range(0);
    const metrics::EmbeddingSet a(gaussian(rng, n, 16)), b(gaussian(rng, n, 16));
    for (auto _ : state) benchmark::DoNotOptimize(metrics::mmd_squared(a, b));
}
BENCHMARK(BM_Mmd)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_DistanceTransform(benchmark::State& state) {
    phantom::CohortOptions opts;
    opts.count = 1;
    const auto vessel = phantom::make_cohort(opts).front().vessel;
    for (auto _ : state) benchmark::DoNotOptimize(morph::euclidean_distance_transform(vessel));
}
BENCHMARK(BM_DistanceTransform)->Unit(benchmark::kMicrosecond);

void BM_FeatureRow(benchmark::State& state) {
    phantom::CohortOptions opts;
    opts.count = 1;
    const auto s = phantom::make_cohort(opts).front();
    const morph::MaskBundle bundle{s.vessel, s.artery, s.vein, s.disc, s.cup};
    for (auto _ : state) benchmark::DoNotOptimize(morph::extract_feature_row(bundle));
}
BENCHMARK(BM_FeatureRow)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
