#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"
#include "fundval/parallel.hpp"
#include "fundval/pipeline.hpp"

using namespace fundval::cli;

int main(int argc, char** argv) {
    CLI::App app{"Fidelity, morphology and utility metrics for synthetic fundus images"};
    app.set_version_flag("--version", fundval::app::version());
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Base random seed")->each([&](const std::string&) { g.seed_given = true; });
    app.add_option("--threads", g.threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    app.add_option("--config", g.config, "Pipeline config (JSON)");

    int code = kOk;
    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };

    VesselnessArgs ves;
    auto* s_ves = sub("vesselness", "Write the Meijering vesselness map as an 8-bit image");
    s_ves->add_option("input", ves.input)->required();
    s_ves->add_option("-o,--output", ves.output);
    s_ves->add_option("--scales", ves.scales, "Comma-separated sigmas")->capture_default_str();
    s_ves->add_flag("--no-normalize", ves.no_normalize);
    s_ves->callback([&] { code = cmd_vesselness(g, ves); });

    EdgeLossArgs edge;
    auto* s_edge = sub("edge-loss", "RMS difference of two vesselness maps");
    s_edge->add_option("a", edge.a)->required();
    s_edge->add_option("b", edge.b)->required();
    s_edge->add_option("--scales", edge.scales)->capture_default_str();
    s_edge->add_flag("--no-normalize", edge.no_normalize);
    s_edge->callback([&] { code = cmd_edge_loss(g, edge); });

    MsssimArgs ms;
    auto* s_ms = sub("msssim", "MS-SSIM over a two-column file of image pairs");
    s_ms->add_option("--pairs", ms.pairs)->required();
    s_ms->add_option("--levels", ms.levels)->capture_default_str()->check(CLI::Range(1, 5));
    s_ms->add_flag("--per-pair", ms.per_pair);
    s_ms->callback([&] { code = cmd_msssim(g, ms); });

    FidArgs fid;
    auto* s_fid = sub("fid", "Frechet distance between two embedding files");
    s_fid->add_option("--a", fid.a)->required();
    s_fid->add_option("--b", fid.b)->required();
    s_fid->callback([&] { code = cmd_fid(g, fid); });

    MmdArgs mmd;
    auto* s_mmd = sub("mmd", "Squared MMD with a Gaussian kernel");
    s_mmd->add_option("--a", mmd.a, "Embedding file");
    s_mmd->add_option("--b", mmd.b, "Embedding file");
    s_mmd->add_option("--a-dir", mmd.a_dir, "Directory of images");
    s_mmd->add_option("--b-dir", mmd.b_dir, "Directory of images");
    s_mmd->add_option("--bandwidth", mmd.bandwidth, "median or a positive number")->capture_default_str();
    s_mmd->add_option("--estimator", mmd.estimator, "unbiased or biased")->capture_default_str();
    s_mmd->callback([&] { code = cmd_mmd(g, mmd); });

    QuantizeArgs qz;
    auto* s_qz = sub("quantize", "Nearest-code quantization of a latent grid");
    s_qz->add_option("--latents", qz.latents)->required();
    s_qz->add_option("--codebook", qz.codebook)->required();
    s_qz->add_option("--beta", qz.beta)->capture_default_str();
    s_qz->add_option("--route", qz.route, "direct or expanded")->capture_default_str();
    s_qz->add_option("-o,--output", qz.output, "Indices CSV");
    s_qz->callback([&] { code = cmd_quantize(g, qz); });

    CodebookFitArgs cf;
    auto* s_cf = sub("codebook-fit", "k-means++ codebook from feature vectors");
    s_cf->add_option("--features", cf.features)->required();
    s_cf->add_option("--k", cf.k)->capture_default_str()->check(CLI::PositiveNumber);
    s_cf->add_option("--iters", cf.iters)->capture_default_str()->check(CLI::PositiveNumber);
    s_cf->add_option("-o,--output", cf.output);
    s_cf->callback([&] { code = cmd_codebook_fit(g, cf); });

    MorphArgs mo;
    auto* s_mo = sub("morph", "Retinal feature row from segmentation masks");
    s_mo->add_option("--vessel", mo.vessel);
    s_mo->add_option("--artery", mo.artery);
    s_mo->add_option("--vein", mo.vein);
    s_mo->add_option("--disc", mo.disc);
    s_mo->add_option("--cup", mo.cup);
    s_mo->add_option("--manifest", mo.manifest, "Batch mode");
    s_mo->add_option("-o,--output", mo.output);
    s_mo->callback([&] { code = cmd_morph(g, mo); });

    PermtestArgs pt;
    auto* s_pt = sub("permtest", "Per-feature permutation tests against the real sample");
    s_pt->add_option("--real", pt.real)->required();
    s_pt->add_option("--synth", pt.synth)->required();
    s_pt->add_option("--permutations", pt.permutations)->capture_default_str()->check(CLI::PositiveNumber);
    s_pt->add_option("--threshold", pt.threshold)->capture_default_str();
    s_pt->add_option("--name", pt.name, "Model name for the summary line");
    s_pt->add_option("-o,--output", pt.output);
    s_pt->callback([&] { code = cmd_permtest(g, pt); });

    TstrArgs ts;
    auto* s_ts = sub("tstr", "Train on synthetic features, test on real");
    s_ts->add_option("--train", ts.train)->required();
    s_ts->add_option("--train-targets", ts.train_targets)->required();
    s_ts->add_option("--test", ts.test)->required();
    s_ts->add_option("--test-targets", ts.test_targets)->required();
    s_ts->add_option("--targets", ts.targets, "e.g. age:cont,sex:bin")->required();
    s_ts->add_option("--repeats", ts.repeats)->capture_default_str()->check(CLI::PositiveNumber);
    s_ts->add_option("--lambda", ts.lambda, "Ridge penalty")->capture_default_str();
    s_ts->add_option("-o,--output", ts.output);
    s_ts->callback([&] { code = cmd_tstr(g, ts); });

    RunArgs run;
    auto* s_run = sub("run", "Full pipeline from a config file");
    s_run->add_option("-o,--output", run.output, "Report path (default <output_dir>/report.json)");
    s_run->add_option("--output-dir", run.output_dir, "Overrides output_dir from the config");
    s_run->add_option("--style", run.style, "table or json")->capture_default_str();
    s_run->callback([&] { code = cmd_run(g, run); });

    RenderArgs rd;
    auto* s_rd = sub("render", "Render a saved report");
    s_rd->add_option("input", rd.input)->required();
    s_rd->add_option("--style", rd.style, "table or json")->capture_default_str();
    s_rd->callback([&] { code = cmd_render(g, rd); });

    PhantomArgs ph;
    auto* s_ph = sub("phantom", "Write the bundled synthetic demo dataset");
    s_ph->add_option("-o,--output", ph.output)->required();
    s_ph->add_option("--count", ph.count, "Samples per group")->capture_default_str()->check(CLI::Range(2, 10000));
    s_ph->add_option("--size", ph.size)->capture_default_str()->check(CLI::Range(64, 4096));
    s_ph->callback([&] { code = cmd_phantom(g, ph); });

    // Thread count has to be in place before any subcommand callback runs.
    app.parse_complete_callback([&] { fundval::set_thread_count(g.threads); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kFatal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFatal;
    }
    return code;
}
