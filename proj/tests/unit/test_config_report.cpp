#include <doctest.h>

#include <fmt/format.h>

#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "fundval/config.hpp"
#include "fundval/error.hpp"
#include "fundval/report.hpp"
#include "oracles.hpp"

using namespace fundval;
using namespace fundval::app;

namespace {

const char* kMinimal = R"({
  "real_manifest": "real/manifest.csv",
  "synth_manifests": [{"name": "Model A", "manifest": "a/manifest.csv"}]
})";

std::string error_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

stats::TstrReport tstr_fixture(double age_mae, double age_sd, double f1, double f1_sd) {
    stats::TstrReport t;
    t.targets.push_back({"age", stats::TargetKind::Continuous, "MAE", age_mae, age_sd, 5, ""});
    t.targets.push_back({"sex", stats::TargetKind::Binary, "F1", f1, f1_sd, 5, ""});
    return t;
}

MetricReport random_report(std::mt19937_64& rng) {
    MetricReport r;
    r.provenance = {"1.2.3", "00ff00ff00ff00ff", {1, 2, 3}, "unbiased", 10000, 1, 7, 5};
    for (int m = 0; m < 3; ++m) {
        ModelReport mr;
        mr.name = fmt::format("model {}", m);
        mr.fidelity.fid = 100 * oracle::uniform01(rng);
        mr.fidelity.fid_regularized = m == 1;
        mr.fidelity.mmd = oracle::normal(rng) * 0.1;
        mr.fidelity.mmd_bandwidth = 1.0 + oracle::uniform01(rng);
        mr.fidelity.msssim = MeanStd{oracle::uniform01(rng), 0.1 * oracle::uniform01(rng), 16};
        if (m != 2) mr.fidelity.edge_loss = MeanStd{oracle::uniform01(rng), 0.01, 16};
        stats::PermutationReport p;
        p.seed = 3;
        for (int f = 0; f < 4; ++f) {
            stats::FeatureTestResult ft;
            ft.name = fmt::format("f{}", f);
            ft.real_mean = oracle::normal(rng);
            ft.real_std = 1.0;
            ft.synth_mean = oracle::normal(rng);
            ft.synth_std = oracle::uniform01(rng);
            ft.p_value = f == 3 ? std::nullopt : std::optional<double>(oracle::uniform01(rng));
            ft.match = ft.p_value && *ft.p_value > p.threshold;
            p.match_count += ft.match;
            p.features.push_back(ft);
        }
        mr.permutation = p;
        mr.tstr = tstr_fixture(5 + oracle::uniform01(rng), 0.2, oracle::uniform01(rng), 0.01);
        MorphologySection ms;
        ms.images = 16;
        ms.skipped = {"bad"};
        ms.columns.push_back({"vessel_density", 16, 0.1, 0.01});
        ms.columns.push_back({"avr", 1, std::nullopt, std::nullopt});
        mr.morphology = ms;
        r.models.push_back(mr);
    }
    r.real_tstr = tstr_fixture(1.0, 0.1, 1.0, 0.0);
    r.stages = {{"fid", "ok", {}}, {"morphology", "partial", {"bad: unreadable"}}};
    return r;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config gets documented defaults") {
    const auto cfg = parse_config(kMinimal, "/data");
    CHECK(cfg.real.manifest == "real/manifest.csv");
    REQUIRE(cfg.synth.size() == 1);
    CHECK(cfg.synth[0].name == "Model A");
    CHECK(cfg.scales == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(cfg.permutation.n_permutations == 10000);
    CHECK(cfg.permutation.threshold == 0.05);
    CHECK(cfg.metrics.size() == all_metrics().size());
    CHECK(cfg.resolve("real/manifest.csv") == std::filesystem::path("/data/real/manifest.csv"));
}

TEST_CASE("strict parsing") {
    CHECK(error_of(R"({"synth_manifests": [{"name": "a", "manifest": "x"}]})") == "missing key: real_manifest");
    CHECK(error_of(R"({"real_manifest": "r"})") == "missing key: synth_manifests");
    CHECK(error_of(R"({"real_manifest": "r", "synth_manifests": [{"name": "a", "manifest": "x"}], "colour": 1})")
              .find("unknown key") != std::string::npos);
    CHECK_FALSE(error_of(R"({"real_manifest": "r", "synth_manifests": []})").empty());
    CHECK_FALSE(error_of(R"({"real_manifest": "r", "synth_manifests": [{"name": "a", "manifest": "x"}],
                             "scales": [2, 1]})")
                    .empty());
    CHECK_FALSE(error_of(R"({"real_manifest": "r", "synth_manifests": [{"name": "a", "manifest": "x"}],
                             "metrics": ["fid", "bogus"]})")
                    .empty());
    CHECK_FALSE(error_of("{not json").empty());
}

TEST_CASE("bundled config round-trips") {
    const auto cfg = load_config(std::filesystem::path(FUNDVAL_DATA_DIR) / "config.json");
    CHECK(cfg.synth.size() == 1);
    CHECK_NOTHROW(validate_paths(cfg));
    const std::string text = serialize_config(cfg);
    const auto again = parse_config(text, cfg.base_dir);
    CHECK(again == cfg);
    CHECK(serialize_config(again) == text);
}

TEST_CASE("missing files are named") {
    auto cfg = parse_config(kMinimal, "/nonexistent-dir");
    try {
        validate_paths(cfg);
        FAIL("expected a missing-path error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("manifest not found") != std::string::npos);
    }
}

TEST_CASE("config hash tracks every field") {
    const auto base = parse_config(kMinimal, "/a");
    CHECK(config_hash(base) == config_hash(parse_config(kMinimal, "/b")));
    CHECK(config_hash(base).size() == 16);

    std::vector<std::function<void(PipelineConfig&)>> mutations = {
        [](PipelineConfig& c) { c.real.manifest = "other.csv"; },
        [](PipelineConfig& c) { c.real.embeddings = "e.fef"; },
        [](PipelineConfig& c) { c.real.targets = "t.csv"; },
        [](PipelineConfig& c) { c.synth[0].name = "Model B"; },
        [](PipelineConfig& c) { c.synth[0].manifest = "b.csv"; },
        [](PipelineConfig& c) { c.synth.push_back({"Model C", "c.csv", {}, {}}); },
        [](PipelineConfig& c) { c.metrics.pop_back(); },
        [](PipelineConfig& c) { c.scales = {1.0, 2.0}; },
        [](PipelineConfig& c) { c.mmd.bandwidth = 2.0; },
        [](PipelineConfig& c) { c.mmd.estimator = metrics::MmdEstimator::Biased; },
        [](PipelineConfig& c) { c.permutation.n_permutations = 999; },
        [](PipelineConfig& c) { c.permutation.threshold = 0.01; },
        [](PipelineConfig& c) { c.permutation.seed = 2; },
        [](PipelineConfig& c) { c.tstr.targets = "age:cont"; },
        [](PipelineConfig& c) { c.tstr.repeats = 3; },
        [](PipelineConfig& c) { c.tstr.seed = 9; },
        [](PipelineConfig& c) { c.tstr.ridge_lambda = 0.5; },
        [](PipelineConfig& c) { c.tstr.train_fraction = 0.7; },
        [](PipelineConfig& c) { c.output_dir = "elsewhere"; },
    };
    std::set<std::string> seen = {config_hash(base)};
    for (const auto& mutate : mutations) {
        auto cfg = base;
        mutate(cfg);
        CHECK_FALSE(cfg == base);
        const auto h = config_hash(cfg);
        CHECK(seen.insert(h).second);
        CHECK(config_hash(parse_config(serialize_config(cfg))) == h);
    }
}

}  // TEST_SUITE

TEST_SUITE("report") {

TEST_CASE("table rendering of a published fixture") {
    MetricReport r;
    ModelReport m;
    m.name = "VQ-GAN (Perceptual)";
    m.fidelity.fid = 2.45;
    m.fidelity.mmd = 0.019;
    m.fidelity.msssim = MeanStd{0.975, 0.007, 100};
    r.models.push_back(m);
    const auto out = lines(render_report(r, RenderStyle::Table));
    REQUIRE(out.size() >= 2);
    CHECK(out[1] == "VQ-GAN (Perceptual)  2.45  0.019  0.975 [0.007]");
}

TEST_CASE("empty report renders the header only") {
    const auto out = lines(render_report(MetricReport{}, RenderStyle::Table));
    REQUIRE(out.size() == 1);
    CHECK(out[0] == "Model  FID  MMD  MS-SSIM");
}

TEST_CASE("tstr table layout") {
    const auto text = render_tstr_table(tstr_fixture(7.72, 0.13, 0.61, 0.02));
    CHECK(text.find("7.72 (0.13)") != std::string::npos);
    CHECK(text.find("0.61 (0.02)") != std::string::npos);
}

TEST_CASE("json round trip") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const auto r = random_report(rng);
        const auto json = report_to_json(r);
        CHECK(report_from_json(json) == r);
        CHECK(report_to_json(report_from_json(json)) == json);
        CHECK(json.find("\"p_value\"") != std::string::npos);
        CHECK(json.find("\"match_count\"") != std::string::npos);
    }
    CHECK_THROWS_AS(report_from_json("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(report_from_json("{"), ConfigError);
}

TEST_CASE("rendered numbers are recoverable from json") {
    std::mt19937_64 rng(32);
    const auto r = random_report(rng);
    const auto back = report_from_json(report_to_json(r));
    const auto table = render_report(r, RenderStyle::Table);
    for (const auto& m : back.models) {
        CHECK(table.find(fmt::format("{:.2f}", *m.fidelity.fid)) != std::string::npos);
        CHECK(table.find(fmt::format("{:.3f}", *m.fidelity.mmd)) != std::string::npos);
        CHECK(table.find(fmt::format("{:.3f} [{:.3f}]", m.fidelity.msssim->mean, m.fidelity.msssim->std)) !=
              std::string::npos);
        CHECK(table.find(stats::format_mean_std(*m.tstr->targets[0].mean, *m.tstr->targets[0].std)) !=
              std::string::npos);
        CHECK(table.find(stats::format_match_summary(m.name, *m.permutation)) != std::string::npos);
    }
    CHECK(table.find("stage morphology partial") != std::string::npos);
    CHECK(table.find("Edge loss") != std::string::npos);
}

}  // TEST_SUITE
