#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "fundval/config.hpp"
#include "fundval/csv.hpp"
#include "fundval/embedding.hpp"
#include "fundval/error.hpp"
#include "fundval/frechet.hpp"
#include "fundval/mmd.hpp"
#include "fundval/morphology.hpp"
#include "fundval/msssim.hpp"
#include "fundval/phantom.hpp"
#include "fundval/pipeline.hpp"
#include "fundval/report.hpp"
#include "fundval/stats.hpp"
#include "fundval/tstr.hpp"
#include "fundval/vesselness.hpp"
#include "fundval/vq.hpp"

namespace fundval::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> parse_scale_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_cell(item);
        if (!v) throw ArgumentError(fmt::format("bad scale list '{}'", text));
        out.push_back(*v);
    }
    return out;
}

namespace {

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

std::string num(double v) { return format_double(v); }

std::vector<img::RasterImage> read_image_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError(fmt::format("not a directory: {}", dir.string()));
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".png" || ext == ".pgm" || ext == ".PNG" || ext == ".PGM")) {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError(fmt::format("no images in {}", dir.string()));
    std::vector<img::RasterImage> images;
    images.reserve(files.size());
    for (const auto& f : files) images.push_back(img::read_image(f));
    return images;
}

metrics::EmbeddingSet embedding_input(const std::string& file, const std::string& dir, const char* which) {
    if (!file.empty() && !dir.empty()) throw ArgumentError(fmt::format("give either --{0} or --{0}-dir", which));
    if (!file.empty()) return metrics::EmbeddingSet(metrics::read_embeddings(file));
    if (!dir.empty()) {
        const auto images = read_image_dir(dir);
        return metrics::EmbeddingSet::from_images(images);
    }
    throw ArgumentError(fmt::format("missing --{0} or --{0}-dir", which));
}

std::optional<std::pair<int, int>> read_grid_sidecar(const fs::path& latents) {
    for (fs::path p : {fs::path(latents.string() + ".json"), fs::path(latents).replace_extension(".json")}) {
        if (!fs::exists(p)) continue;
        try {
            const json j = json::parse(read_text_file(p));
            return std::pair{j.at("h").get<int>(), j.at("w").get<int>()};
        } catch (const json::exception& e) {
            throw IoError(fmt::format("{}: bad grid sidecar: {}", p.string(), e.what()));
        }
    }
    return std::nullopt;
}

}  // namespace

int cmd_vesselness(const GlobalOptions&, const VesselnessArgs& a) {
    const auto image = img::read_image(a.input);
    const vessel::ScaleSet scales(parse_scale_list(a.scales));
    const auto map = vessel::meijering_vesselness(img::green_channel(image), scales, !a.no_normalize);
    img::GrayImage out = map.response;
    if (a.no_normalize) {
        // Inspection output only: rescale into [0,1] before 8-bit quantization.
        const double top = *std::max_element(out.data.begin(), out.data.end());
        if (top > 0) {
            for (double& v : out.data) v /= top;
        }
    }
    const std::string path = a.output.empty() ? fs::path(a.input).stem().string() + "_vesselness.pgm" : a.output;
    img::write_image(path, out);
    return kOk;
}

int cmd_edge_loss(const GlobalOptions&, const EdgeLossArgs& a) {
    const vessel::ScaleSet scales(parse_scale_list(a.scales));
    const double loss = vessel::edge_loss(img::read_image(a.a), img::read_image(a.b), scales, !a.no_normalize);
    std::cout << num(loss) << "\n";
    return kOk;
}

int cmd_msssim(const GlobalOptions&, const MsssimArgs& a) {
    const CsvTable table = read_csv(a.pairs);
    const fs::path base = fs::path(a.pairs).parent_path();
    std::vector<std::vector<std::string>> rows = table.rows;
    // A first line naming existing files is data, not a header.
    if (table.header.size() >= 2 && fs::exists(base / table.header[0])) rows.insert(rows.begin(), table.header);
    std::vector<double> values;
    std::vector<std::string> lines;
    for (const auto& row : rows) {
        if (row.size() < 2) throw IoError("pairs file needs two columns");
        const auto ia = img::read_image(base / row[0]);
        const auto ib = img::read_image(base / row[1]);
        const double v = metrics::msssim(img::green_channel(ia), img::green_channel(ib), a.levels);
        values.push_back(v);
        lines.push_back(fmt::format("{},{},{}", row[0], row[1], num(v)));
    }
    if (values.empty()) throw ArgumentError("pairs file is empty");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    if (a.per_pair) {
        for (const auto& l : lines) std::cout << l << "\n";
    }
    std::cout << fmt::format("{:.3f} [{:.3f}]  (n={}, mean={}, std={})\n", mean, sd, values.size(), num(mean), num(sd));
    return kOk;
}

int cmd_fid(const GlobalOptions&, const FidArgs& a) {
    const auto sa = metrics::gaussian_summary(metrics::EmbeddingSet(metrics::read_embeddings(a.a)));
    const auto sb = metrics::gaussian_summary(metrics::EmbeddingSet(metrics::read_embeddings(a.b)));
    const auto r = metrics::frechet_distance(sa, sb);
    if (r.regularized) std::cerr << "note: singular covariance, added epsilon*I before the square root\n";
    std::cout << num(r.distance) << "\n";
    return kOk;
}

int cmd_mmd(const GlobalOptions&, const MmdArgs& a) {
    const auto sa = embedding_input(a.a, a.a_dir, "a");
    const auto sb = embedding_input(a.b, a.b_dir, "b");
    metrics::MmdOptions opts;
    opts.estimator = metrics::parse_estimator(a.estimator);
    if (a.bandwidth != "median") {
        const auto h = parse_cell(a.bandwidth);
        if (!h || !(*h > 0)) throw ArgumentError("--bandwidth must be 'median' or a positive number");
        opts.bandwidth = *h;
    }
    const auto r = metrics::mmd_squared(sa, sb, opts);
    std::cout << fmt::format("{}\nbandwidth {}\n", num(r.mmd2), num(r.bandwidth));
    return kOk;
}

int cmd_quantize(const GlobalOptions&, const QuantizeArgs& a) {
    Eigen::MatrixXd z = metrics::read_embeddings(a.latents);
    const vq::Codebook cb(metrics::read_embeddings(a.codebook));
    int h = static_cast<int>(z.rows());
    int w = 1;
    if (const auto grid = read_grid_sidecar(a.latents)) {
        h = grid->first;
        w = grid->second;
    }
    const vq::LatentGrid grid(h, w, std::move(z));
    vq::DistanceRoute route = vq::DistanceRoute::Direct;
    if (a.route == "expanded") {
        route = vq::DistanceRoute::Expanded;
    } else if (a.route != "direct") {
        throw ArgumentError("--route must be direct or expanded");
    }
    const auto r = vq::quantize(grid, cb, a.beta, route);
    std::vector<std::int32_t> used(r.indices);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    const json summary = {{"h", h},
                          {"w", w},
                          {"codebook_size", cb.size()},
                          {"codes_used", used.size()},
                          {"codebook_loss", r.codebook_loss},
                          {"commitment_loss", r.commitment_loss},
                          {"perplexity", r.perplexity}};
    std::cout << summary.dump(2) << "\n";
    if (!a.output.empty()) {
        CsvTable t;
        t.header = {"row", "col", "index"};
        for (int i = 0; i < h; ++i) {
            for (int j = 0; j < w; ++j) {
                t.rows.push_back({std::to_string(i), std::to_string(j),
                                  std::to_string(r.indices[static_cast<std::size_t>(i) * w + j])});
            }
        }
        write_csv(a.output, t);
    }
    return kOk;
}

int cmd_codebook_fit(const GlobalOptions& g, const CodebookFitArgs& a) {
    const metrics::EmbeddingSet set(metrics::read_embeddings(a.features));
    const auto r = vq::kmeans_codebook(set, a.k, a.iters, g.seed);
    const std::string out = a.output.empty() ? "codebook.fef" : a.output;
    metrics::write_fef(out, r.codebook.entries());
    for (std::size_t i = 0; i < r.inertia.size(); ++i) std::cout << fmt::format("iter {} inertia {}\n", i + 1, num(r.inertia[i]));
    std::cout << fmt::format("wrote {} codes of dim {} to {}\n", r.codebook.size(), r.codebook.dim(), out);
    return kOk;
}

int cmd_morph(const GlobalOptions&, const MorphArgs& a) {
    if (!a.manifest.empty()) {
        if (!a.vessel.empty()) throw ArgumentError("give either --manifest or --vessel");
        const auto batch = app::extract_features(app::read_manifest(a.manifest));
        for (const auto& m : batch.messages) std::cerr << "skipped " << m << "\n";
        write_or_print(a.output, stats::format_feature_csv(batch.features));
        return batch.skipped.empty() ? kOk : kPartial;
    }
    if (a.vessel.empty()) throw ArgumentError("--vessel or --manifest is required");
    morph::MaskBundle b;
    b.vessel = morph::read_mask(a.vessel);
    if (!a.artery.empty()) b.artery = morph::read_mask(a.artery);
    if (!a.vein.empty()) b.vein = morph::read_mask(a.vein);
    if (!a.disc.empty()) b.disc = morph::read_mask(a.disc);
    if (!a.cup.empty()) b.cup = morph::read_mask(a.cup);
    const auto row = morph::extract_feature_row(b);
    const auto& names = morph::RetinalFeatureRow::names();
    stats::FeatureMatrix fm(std::vector<std::string>(names.begin(), names.end()));
    const auto v = row.values();
    fm.add_row(std::vector<std::optional<double>>(v.begin(), v.end()), fs::path(a.vessel).stem().string());
    write_or_print(a.output, stats::format_feature_csv(fm));
    return kOk;
}

int cmd_permtest(const GlobalOptions& g, const PermtestArgs& a) {
    const auto real = stats::read_feature_csv(a.real);
    const auto synth = stats::read_feature_csv(a.synth);
    const auto report = stats::distribution_match_report(real, synth, a.threshold, a.permutations, g.seed);
    std::cout << fmt::format("{:<28} {:>10} {:>10} {:>10}  {}\n", "feature", "synth_mean", "synth_std", "p", "match");
    for (const auto& f : report.features) {
        std::cout << fmt::format("{:<28} {:>10} {:>10} {:>10}  {}\n", f.name,
                                 f.synth_mean ? fmt::format("{:.3f}", *f.synth_mean) : "-",
                                 f.synth_std ? fmt::format("{:.3f}", *f.synth_std) : "-",
                                 f.p_value ? fmt::format("{:.4f}", *f.p_value) : "-", f.match ? "yes" : "no");
    }
    std::cout << stats::format_match_summary(a.name, report) << "\n";
    if (!a.output.empty()) write_text_file(a.output, app::permutation_report_to_json(report));
    return kOk;
}

int cmd_tstr(const GlobalOptions& g, const TstrArgs& a) {
    const auto train = stats::read_feature_csv(a.train);
    const auto test = stats::read_feature_csv(a.test);
    auto aligned = [](const stats::FeatureMatrix& features, const stats::FeatureMatrix& targets) {
        stats::FeatureMatrix out(targets.column_names());
        for (std::size_t r = 0; r < features.rows(); ++r) {
            const auto t = targets.find_row(features.ids()[r]);
            if (!t && targets.rows() != features.rows()) {
                throw ArgumentError("target rows must match feature ids or row order");
            }
            const std::size_t src = t ? *t : r;
            std::vector<std::optional<double>> row(targets.cols());
            for (std::size_t c = 0; c < targets.cols(); ++c) row[c] = targets.at(src, c);
            out.add_row(std::move(row), features.ids()[r]);
        }
        return out;
    };
    const auto train_t = aligned(train, stats::read_feature_csv(a.train_targets));
    const auto test_t = aligned(test, stats::read_feature_csv(a.test_targets));
    stats::TstrOptions opts;
    opts.repeats = a.repeats;
    opts.seed = g.seed;
    opts.ridge_lambda = a.lambda;
    opts.logistic.seed = g.seed;
    const auto report = stats::tstr_evaluate(train, train_t, test, test_t, stats::parse_target_specs(a.targets), opts);
    std::cout << app::render_tstr_table(report);
    bool failed = false;
    for (const auto& t : report.targets) {
        if (t.error.empty()) continue;
        failed = true;
        std::cerr << fmt::format("target {} failed: {}\n", t.name, t.error);
    }
    if (!a.output.empty()) write_text_file(a.output, app::tstr_report_to_json(report));
    return failed ? kPartial : kOk;
}

int cmd_run(const GlobalOptions& g, const RunArgs& a) {
    if (g.config.empty()) throw ArgumentError("run needs --config <file>");
    app::PipelineConfig cfg = app::load_config(g.config);
    if (g.seed_given) {
        cfg.permutation.seed = g.seed;
        cfg.tstr.seed = g.seed;
    }
    app::validate_paths(cfg);
    const auto style = app::parse_render_style(a.style);
    const auto result = app::run_pipeline(cfg, [](std::string_view msg) { std::cerr << msg << "\n"; });

    const fs::path out_dir = a.output_dir.empty() ? cfg.resolve(cfg.output_dir) : fs::path(a.output_dir);
    fs::create_directories(out_dir);
    const fs::path report_path = a.output.empty() ? out_dir / "report.json" : fs::path(a.output);
    write_text_file(report_path, app::report_to_json(result.report));
    for (const auto& [name, fm] : result.features) {
        std::string file;
        for (char c : name) file += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
        write_text_file(out_dir / (file + "_features.csv"), stats::format_feature_csv(fm));
    }
    std::cout << app::render_report(result.report, style);
    return result.report.has_failures() ? kPartial : kOk;
}

int cmd_render(const GlobalOptions&, const RenderArgs& a) {
    const auto report = app::report_from_json(read_text_file(a.input));
    std::cout << app::render_report(report, app::parse_render_style(a.style));
    return kOk;
}

int cmd_phantom(const GlobalOptions& g, const PhantomArgs& a) {
    phantom::write_demo_dataset(a.output, a.count, a.size, g.seed_given ? g.seed : 2024);
    std::cout << fmt::format("wrote {} real and {} synthetic samples under {}\n", a.count, a.count, a.output);
    return kOk;
}

}  // namespace fundval::cli
