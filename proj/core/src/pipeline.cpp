#include "fundval/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "fundval/csv.hpp"
#include "fundval/embedding.hpp"
#include "fundval/error.hpp"
#include "fundval/frechet.hpp"
#include "fundval/mmd.hpp"
#include "fundval/morphology.hpp"
#include "fundval/msssim.hpp"
#include "fundval/parallel.hpp"
#include "fundval/stats.hpp"
#include "fundval/tstr.hpp"
#include "fundval/vesselness.hpp"

namespace fundval::app {

namespace fs = std::filesystem;

const char* version() { return FUNDVAL_VERSION_STRING; }

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
    const CsvTable table = read_csv(path);
    const std::size_t id_col = table.column("id");
    const fs::path base = path.parent_path();
    auto path_col = [&](const char* name) { return table.find_column(name); };
    const auto image = path_col("image");
    const auto vessel = path_col("vessel");
    const auto artery = path_col("artery");
    const auto vein = path_col("vein");
    const auto disc = path_col("disc");
    const auto cup = path_col("cup");
    const auto emb = path_col("embedding_row");

    std::vector<ManifestEntry> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        auto cell = [&](std::optional<std::size_t> c) -> std::optional<fs::path> {
            if (!c || row[*c].empty()) return std::nullopt;
            const fs::path p = row[*c];
            return p.is_absolute() ? p : base / p;
        };
        ManifestEntry e;
        e.id = row[id_col];
        if (e.id.empty()) throw IoError(fmt::format("{}: row {} has an empty id", path.string(), r + 2));
        e.image = cell(image);
        e.vessel = cell(vessel);
        e.artery = cell(artery);
        e.vein = cell(vein);
        e.disc = cell(disc);
        e.cup = cell(cup);
        if (emb && !row[*emb].empty()) {
            const auto v = parse_cell(row[*emb]);
            if (!v || *v < 0 || std::floor(*v) != *v) {
                throw IoError(fmt::format("{}: bad embedding_row for id {}", path.string(), e.id));
            }
            e.embedding_row = static_cast<std::size_t>(*v);
        }
        out.push_back(std::move(e));
    }
    return out;
}

MorphologyBatch extract_features(const std::vector<ManifestEntry>& entries) {
    const auto& names = morph::RetinalFeatureRow::names();
    std::vector<std::optional<morph::RetinalFeatureRow>> rows(entries.size());
    std::vector<std::string> errors(entries.size());
    parallel_for(0, entries.size(), [&](std::size_t i) {
        const ManifestEntry& e = entries[i];
        try {
            if (!e.vessel) throw IoError("no vessel mask");
            morph::MaskBundle b;
            b.vessel = morph::read_mask(*e.vessel);
            if (e.artery) b.artery = morph::read_mask(*e.artery);
            if (e.vein) b.vein = morph::read_mask(*e.vein);
            if (e.disc) b.disc = morph::read_mask(*e.disc);
            if (e.cup) b.cup = morph::read_mask(*e.cup);
            rows[i] = morph::extract_feature_row(b);
        } catch (const std::exception& ex) {
            errors[i] = ex.what();
        }
    });
    MorphologyBatch batch{stats::FeatureMatrix(std::vector<std::string>(names.begin(), names.end())), {}, {}};
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!rows[i]) {
            batch.skipped.push_back(entries[i].id);
            batch.messages.push_back(fmt::format("{}: {}", entries[i].id, errors[i]));
            continue;
        }
        const auto v = rows[i]->values();
        batch.features.add_row(std::vector<std::optional<double>>(v.begin(), v.end()), entries[i].id);
    }
    return batch;
}

namespace {

struct Dataset {
    const DatasetSpec* spec = nullptr;
    std::vector<ManifestEntry> entries;
    std::vector<std::optional<img::RasterImage>> images;
    std::optional<MorphologyBatch> morphology;
};

struct StageLog {
    explicit StageLog(std::string name) : stage(std::move(name)) {}

    std::string stage;
    std::vector<std::string> messages;
    int attempted = 0;
    int failed = 0;
    bool partial = false;

    void fail(const std::string& msg) {
        ++failed;
        messages.push_back(msg);
    }
    [[nodiscard]] StageStatus status() const {
        std::string s = "ok";
        if (failed > 0 && failed >= attempted) {
            s = "failed";
        } else if (failed > 0 || partial) {
            s = "partial";
        }
        return {stage, s, messages};
    }
};

MeanStd summarize(const std::vector<double>& v) {
    MeanStd m;
    m.n = v.size();
    if (v.empty()) return m;
    double sum = 0.0;
    for (double x : v) sum += x;
    m.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return m;
}

void load_images(Dataset& d, const LogFn& log, StageLog& stage) {
    if (!d.images.empty()) return;
    d.images.resize(d.entries.size());
    std::vector<std::string> errors(d.entries.size());
    parallel_for(0, d.entries.size(), [&](std::size_t i) {
        try {
            if (!d.entries[i].image) throw IoError("no image path");
            d.images[i] = img::read_image(*d.entries[i].image);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i].empty()) continue;
        const std::string msg = fmt::format("{} image {} skipped: {}", d.spec->name, d.entries[i].id, errors[i]);
        if (log) log(msg);
        stage.messages.push_back(msg);
        stage.partial = true;
    }
}

metrics::EmbeddingSet load_embeddings(const PipelineConfig& cfg, const Dataset& d) {
    if (!d.spec->embeddings) throw ArgumentError("no embeddings configured");
    const Eigen::MatrixXd all = metrics::read_embeddings(cfg.resolve(*d.spec->embeddings));
    const bool indexed = std::any_of(d.entries.begin(), d.entries.end(),
                                     [](const ManifestEntry& e) { return e.embedding_row.has_value(); });
    if (!indexed) return metrics::EmbeddingSet(all);
    std::vector<Eigen::Index> rows;
    for (const auto& e : d.entries) {
        if (!e.embedding_row) continue;
        if (static_cast<Eigen::Index>(*e.embedding_row) >= all.rows()) {
            throw ArgumentError(fmt::format("embedding_row {} of {} is out of range", *e.embedding_row, e.id));
        }
        rows.push_back(static_cast<Eigen::Index>(*e.embedding_row));
    }
    Eigen::MatrixXd sel(static_cast<Eigen::Index>(rows.size()), all.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) sel.row(static_cast<Eigen::Index>(i)) = all.row(rows[i]);
    return metrics::EmbeddingSet(std::move(sel));
}

// Image pairs are formed in manifest order: real[i] with synth[i].
std::vector<double> paired_scores(const Dataset& real, const Dataset& synth, StageLog& stage,
                                  const std::function<double(const img::RasterImage&, const img::RasterImage&)>& score) {
    const std::size_t n = std::min(real.images.size(), synth.images.size());
    std::vector<std::optional<double>> values(n);
    std::vector<std::string> errors(n);
    parallel_for(0, n, [&](std::size_t i) {
        if (!real.images[i] || !synth.images[i]) return;
        try {
            values[i] = score(*real.images[i], *synth.images[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i]) {
            out.push_back(*values[i]);
        } else if (!errors[i].empty()) {
            stage.messages.push_back(
                fmt::format("{} pair {}/{}: {}", synth.spec->name, real.entries[i].id, synth.entries[i].id, errors[i]));
            stage.partial = true;
        }
    }
    if (out.empty()) throw ArgumentError("no image pairs could be scored");
    return out;
}

stats::FeatureMatrix align_targets(const stats::FeatureMatrix& features, const stats::FeatureMatrix& targets) {
    stats::FeatureMatrix out(targets.column_names());
    for (const auto& id : features.ids()) {
        const auto r = targets.find_row(id);
        std::vector<std::optional<double>> row(targets.cols());
        if (r) {
            for (std::size_t c = 0; c < targets.cols(); ++c) row[c] = targets.at(*r, c);
        }
        out.add_row(std::move(row), id);
    }
    return out;
}

}  // namespace

PipelineOutput run_pipeline(const PipelineConfig& cfg, const LogFn& log) {
    if (cfg.synth.empty()) throw ConfigError("at least one synthetic manifest is required");

    std::vector<Dataset> data(cfg.synth.size() + 1);
    data[0].spec = &cfg.real;
    for (std::size_t i = 0; i < cfg.synth.size(); ++i) data[i + 1].spec = &cfg.synth[i];
    for (auto& d : data) d.entries = read_manifest(cfg.resolve(d.spec->manifest));
    Dataset& real = data[0];

    PipelineOutput out;
    MetricReport& report = out.report;
    report.provenance.tool_version = version();
    report.provenance.config_hash = config_hash(cfg);
    report.provenance.scales = cfg.scales;
    report.provenance.mmd_estimator = metrics::to_string(cfg.mmd.estimator);
    report.provenance.n_permutations = cfg.permutation.n_permutations;
    report.provenance.permutation_seed = cfg.permutation.seed;
    report.provenance.tstr_seed = cfg.tstr.seed;
    report.provenance.tstr_repeats = cfg.tstr.repeats;
    for (std::size_t i = 1; i < data.size(); ++i) report.models.push_back(ModelReport{data[i].spec->name, {}, {}, {}, {}});

    auto for_models = [&](StageLog& stage, const std::function<void(Dataset&, ModelReport&)>& fn) {
        for (std::size_t i = 1; i < data.size(); ++i) {
            ++stage.attempted;
            try {
                fn(data[i], report.models[i - 1]);
            } catch (const std::exception& e) {
                const std::string msg = fmt::format("{}: {}", data[i].spec->name, e.what());
                if (log) log(fmt::format("{} failed for {}", stage.stage, msg));
                stage.fail(msg);
            }
        }
        report.stages.push_back(stage.status());
    };

    if (cfg.enabled(Metric::Fid)) {
        StageLog stage("fid");
        std::optional<metrics::GaussianSummary> real_summary;
        std::string real_error;
        try {
            real_summary = metrics::gaussian_summary(load_embeddings(cfg, real));
        } catch (const std::exception& e) {
            real_error = e.what();
        }
        for_models(stage, [&](Dataset& d, ModelReport& m) {
            if (!real_summary) throw ArgumentError("real embeddings: " + real_error);
            const auto r = metrics::frechet_distance(*real_summary, metrics::gaussian_summary(load_embeddings(cfg, d)));
            m.fidelity.fid = r.distance;
            m.fidelity.fid_regularized = r.regularized;
        });
    }

    if (cfg.enabled(Metric::Mmd)) {
        StageLog stage("mmd");
        std::optional<metrics::EmbeddingSet> real_set;
        std::string real_error;
        try {
            real_set = load_embeddings(cfg, real);
        } catch (const std::exception& e) {
            real_error = e.what();
        }
        metrics::MmdOptions opts;
        opts.bandwidth = cfg.mmd.bandwidth;
        opts.estimator = cfg.mmd.estimator;
        for_models(stage, [&](Dataset& d, ModelReport& m) {
            if (!real_set) throw ArgumentError("real embeddings: " + real_error);
            const auto r = metrics::mmd_squared(*real_set, load_embeddings(cfg, d), opts);
            m.fidelity.mmd = r.mmd2;
            m.fidelity.mmd_bandwidth = r.bandwidth;
        });
    }

    if (cfg.enabled(Metric::Msssim)) {
        StageLog stage("msssim");
        for (auto& d : data) load_images(d, log, stage);
        for_models(stage, [&](Dataset& d, ModelReport& m) {
            m.fidelity.msssim = summarize(paired_scores(real, d, stage, [](const auto& a, const auto& b) {
                return metrics::msssim(img::green_channel(a), img::green_channel(b));
            }));
        });
    }

    if (cfg.enabled(Metric::EdgeLoss)) {
        StageLog stage("edge_loss");
        for (auto& d : data) load_images(d, log, stage);
        const vessel::ScaleSet scales(cfg.scales);
        for_models(stage, [&](Dataset& d, ModelReport& m) {
            m.fidelity.edge_loss = summarize(paired_scores(
                real, d, stage, [&](const auto& a, const auto& b) { return vessel::edge_loss(a, b, scales); }));
        });
    }

    const bool need_features =
        cfg.enabled(Metric::Morphology) || cfg.enabled(Metric::Permutation) || cfg.enabled(Metric::Tstr);
    if (need_features) {
        StageLog stage("morphology");
        for (auto& d : data) {
            ++stage.attempted;
            try {
                d.morphology = extract_features(d.entries);
            } catch (const std::exception& e) {
                stage.fail(fmt::format("{}: {}", d.spec->name, e.what()));
                continue;
            }
            for (const auto& msg : d.morphology->messages) {
                if (log) log(fmt::format("{} {} skipped", d.spec->name, msg));
                stage.messages.push_back(fmt::format("{} {}", d.spec->name, msg));
                stage.partial = true;
            }
            if (d.morphology->features.rows() == 0) stage.fail(d.spec->name + ": no usable masks");
            out.features.emplace_back(d.spec->name, d.morphology->features);
        }
        if (cfg.enabled(Metric::Morphology)) {
            auto section = [](const MorphologyBatch& b) {
                return MorphologySection{b.features.rows(), b.skipped, stats::summary_stats(b.features)};
            };
            if (real.morphology) report.real_morphology = section(*real.morphology);
            for (std::size_t i = 1; i < data.size(); ++i) {
                if (data[i].morphology) report.models[i - 1].morphology = section(*data[i].morphology);
            }
            report.stages.push_back(stage.status());
        } else if (stage.status().status != "ok") {
            report.stages.push_back(stage.status());
        }
    }

    if (cfg.enabled(Metric::Permutation)) {
        StageLog stage("permutation");
        for_models(stage, [&](Dataset& d, ModelReport& m) {
            if (!real.morphology || !d.morphology) throw ArgumentError("features unavailable");
            m.permutation =
                stats::distribution_match_report(real.morphology->features, d.morphology->features,
                                                 cfg.permutation.threshold, cfg.permutation.n_permutations,
                                                 cfg.permutation.seed);
        });
    }

    if (cfg.enabled(Metric::Tstr)) {
        StageLog stage("tstr");
        std::vector<stats::TargetSpec> specs;
        std::string setup_error;
        try {
            if (cfg.tstr.targets.empty()) throw ConfigError("no tstr targets configured");
            specs = stats::parse_target_specs(cfg.tstr.targets);
        } catch (const std::exception& e) {
            setup_error = e.what();
        }
        stats::TstrOptions opts;
        opts.repeats = cfg.tstr.repeats;
        opts.seed = cfg.tstr.seed;
        opts.train_fraction = cfg.tstr.train_fraction;
        opts.ridge_lambda = cfg.tstr.ridge_lambda;
        opts.logistic.seed = cfg.tstr.seed;

        auto targets_for = [&](const Dataset& d) {
            if (!d.spec->targets) throw ArgumentError("no targets file configured");
            if (!d.morphology) throw ArgumentError("features unavailable");
            return align_targets(d.morphology->features, stats::read_feature_csv(cfg.resolve(*d.spec->targets)));
        };
        auto note_target_errors = [&](const std::string& name, const stats::TstrReport& r) {
            for (const auto& t : r.targets) {
                if (t.error.empty()) continue;
                stage.messages.push_back(fmt::format("{} target {}: {}", name, t.name, t.error));
                stage.partial = true;
            }
        };

        std::optional<stats::FeatureMatrix> real_targets;
        std::string real_error = setup_error;
        if (setup_error.empty()) {
            try {
                real_targets = targets_for(real);
                report.real_tstr = stats::tstr_evaluate(real.morphology->features, *real_targets,
                                                        real.morphology->features, *real_targets, specs, opts);
                note_target_errors(real.spec->name, *report.real_tstr);
            } catch (const std::exception& e) {
                real_error = e.what();
                real_targets.reset();
            }
        }
        for_models(stage, [&](Dataset& d, ModelReport& m) {
            if (!real_targets) throw ArgumentError(real_error);
            m.tstr = stats::tstr_evaluate(d.morphology->features, targets_for(d), real.morphology->features,
                                          *real_targets, specs, opts);
            note_target_errors(d.spec->name, *m.tstr);
        });
        // for_models has already pushed the status; refresh it with target-level notes.
        report.stages.back() = stage.status();
    }
    return out;
}

}  // namespace fundval::app
