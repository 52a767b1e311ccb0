#include "fundval/report.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <json.hpp>

#include "fundval/error.hpp"

namespace fundval::app {

using nlohmann::json;

bool MetricReport::has_failures() const {
    return std::any_of(stages.begin(), stages.end(), [](const StageStatus& s) { return s.status != "ok"; });
}

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

json mean_std_json(const std::optional<MeanStd>& m) {
    if (!m) return nullptr;
    return {{"mean", m->mean}, {"std", m->std}, {"n", m->n}};
}

std::optional<MeanStd> mean_std_from(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return MeanStd{it->at("mean").get<double>(), it->at("std").get<double>(), it->at("n").get<std::size_t>()};
}

json columns_json(const std::vector<stats::ColumnSummary>& cols) {
    json out = json::array();
    for (const auto& c : cols) {
        out.push_back({{"name", c.name}, {"count", c.count}, {"mean", opt(c.mean)}, {"std", opt(c.std)}});
    }
    return out;
}

json morphology_json(const std::optional<MorphologySection>& m) {
    if (!m) return nullptr;
    return {{"images", m->images}, {"skipped", m->skipped}, {"columns", columns_json(m->columns)}};
}

std::optional<MorphologySection> morphology_from(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    MorphologySection m;
    m.images = it->at("images").get<std::size_t>();
    m.skipped = it->at("skipped").get<std::vector<std::string>>();
    for (const auto& c : it->at("columns")) {
        stats::ColumnSummary s;
        s.name = c.at("name").get<std::string>();
        s.count = c.at("count").get<std::size_t>();
        s.mean = get_opt<double>(c, "mean");
        s.std = get_opt<double>(c, "std");
        m.columns.push_back(std::move(s));
    }
    return m;
}

json permutation_json(const stats::PermutationReport& r) {
    json features = json::array();
    for (const auto& f : r.features) {
        features.push_back({{"name", f.name},
                            {"real_mean", opt(f.real_mean)},
                            {"real_std", opt(f.real_std)},
                            {"synth_mean", opt(f.synth_mean)},
                            {"synth_std", opt(f.synth_std)},
                            {"p_value", opt(f.p_value)},
                            {"match", f.match}});
    }
    return {{"features", features},
            {"threshold", r.threshold},
            {"n_permutations", r.n_permutations},
            {"seed", r.seed},
            {"match_count", r.match_count}};
}

stats::PermutationReport permutation_from(const json& j) {
    stats::PermutationReport r;
    for (const auto& f : j.at("features")) {
        stats::FeatureTestResult t;
        t.name = f.at("name").get<std::string>();
        t.real_mean = get_opt<double>(f, "real_mean");
        t.real_std = get_opt<double>(f, "real_std");
        t.synth_mean = get_opt<double>(f, "synth_mean");
        t.synth_std = get_opt<double>(f, "synth_std");
        t.p_value = get_opt<double>(f, "p_value");
        t.match = f.at("match").get<bool>();
        r.features.push_back(std::move(t));
    }
    r.threshold = j.at("threshold").get<double>();
    r.n_permutations = j.at("n_permutations").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.match_count = j.at("match_count").get<int>();
    return r;
}

json tstr_json(const stats::TstrReport& r) {
    json targets = json::array();
    for (const auto& t : r.targets) {
        targets.push_back({{"name", t.name},
                           {"kind", stats::to_string(t.kind)},
                           {"metric", t.metric},
                           {"mean", opt(t.mean)},
                           {"std", opt(t.std)},
                           {"n_repeats", t.n_repeats},
                           {"error", t.error}});
    }
    return {{"targets", targets}};
}

stats::TstrReport tstr_from(const json& j) {
    stats::TstrReport r;
    for (const auto& t : j.at("targets")) {
        stats::TstrTargetResult x;
        x.name = t.at("name").get<std::string>();
        const auto kind = t.at("kind").get<std::string>();
        if (kind != "continuous" && kind != "binary") throw ConfigError("report: unknown target kind " + kind);
        x.kind = kind == "continuous" ? stats::TargetKind::Continuous : stats::TargetKind::Binary;
        x.metric = t.at("metric").get<std::string>();
        x.mean = get_opt<double>(t, "mean");
        x.std = get_opt<double>(t, "std");
        x.n_repeats = t.at("n_repeats").get<int>();
        x.error = t.at("error").get<std::string>();
        r.targets.push_back(std::move(x));
    }
    return r;
}

json report_json(const MetricReport& r) {
    const Provenance& p = r.provenance;
    json doc;
    doc["provenance"] = {{"tool_version", p.tool_version},         {"config_hash", p.config_hash},
                         {"scales", p.scales},                     {"mmd_estimator", p.mmd_estimator},
                         {"n_permutations", p.n_permutations},     {"permutation_seed", p.permutation_seed},
                         {"tstr_seed", p.tstr_seed},               {"tstr_repeats", p.tstr_repeats}};
    doc["real_morphology"] = morphology_json(r.real_morphology);
    doc["real_tstr"] = r.real_tstr ? tstr_json(*r.real_tstr) : json(nullptr);
    doc["models"] = json::array();
    for (const auto& m : r.models) {
        const FidelitySection& f = m.fidelity;
        doc["models"].push_back({{"name", m.name},
                                 {"fidelity",
                                  {{"fid", opt(f.fid)},
                                   {"fid_regularized", opt(f.fid_regularized)},
                                   {"mmd", opt(f.mmd)},
                                   {"mmd_bandwidth", opt(f.mmd_bandwidth)},
                                   {"msssim", mean_std_json(f.msssim)},
                                   {"edge_loss", mean_std_json(f.edge_loss)}}},
                                 {"morphology", morphology_json(m.morphology)},
                                 {"permutation", m.permutation ? permutation_json(*m.permutation) : json(nullptr)},
                                 {"tstr", m.tstr ? tstr_json(*m.tstr) : json(nullptr)}});
    }
    doc["stages"] = json::array();
    for (const auto& s : r.stages) {
        doc["stages"].push_back({{"stage", s.stage}, {"status", s.status}, {"messages", s.messages}});
    }
    return doc;
}

}  // namespace

std::string report_to_json(const MetricReport& r) { return report_json(r).dump(2) + "\n"; }

std::string permutation_report_to_json(const stats::PermutationReport& r) { return permutation_json(r).dump(2) + "\n"; }

std::string tstr_report_to_json(const stats::TstrReport& r) { return tstr_json(r).dump(2) + "\n"; }

MetricReport report_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        MetricReport r;
        const json& p = doc.at("provenance");
        r.provenance.tool_version = p.at("tool_version").get<std::string>();
        r.provenance.config_hash = p.at("config_hash").get<std::string>();
        r.provenance.scales = p.at("scales").get<std::vector<double>>();
        r.provenance.mmd_estimator = p.at("mmd_estimator").get<std::string>();
        r.provenance.n_permutations = p.at("n_permutations").get<int>();
        r.provenance.permutation_seed = p.at("permutation_seed").get<std::uint64_t>();
        r.provenance.tstr_seed = p.at("tstr_seed").get<std::uint64_t>();
        r.provenance.tstr_repeats = p.at("tstr_repeats").get<int>();
        r.real_morphology = morphology_from(doc, "real_morphology");
        if (!doc.at("real_tstr").is_null()) r.real_tstr = tstr_from(doc.at("real_tstr"));
        for (const auto& m : doc.at("models")) {
            ModelReport mr;
            mr.name = m.at("name").get<std::string>();
            const json& f = m.at("fidelity");
            mr.fidelity.fid = get_opt<double>(f, "fid");
            mr.fidelity.fid_regularized = get_opt<bool>(f, "fid_regularized");
            mr.fidelity.mmd = get_opt<double>(f, "mmd");
            mr.fidelity.mmd_bandwidth = get_opt<double>(f, "mmd_bandwidth");
            mr.fidelity.msssim = mean_std_from(f, "msssim");
            mr.fidelity.edge_loss = mean_std_from(f, "edge_loss");
            mr.morphology = morphology_from(m, "morphology");
            if (!m.at("permutation").is_null()) mr.permutation = permutation_from(m.at("permutation"));
            if (!m.at("tstr").is_null()) mr.tstr = tstr_from(m.at("tstr"));
            r.models.push_back(std::move(mr));
        }
        for (const auto& s : doc.at("stages")) {
            r.stages.push_back({s.at("stage").get<std::string>(), s.at("status").get<std::string>(),
                                s.at("messages").get<std::vector<std::string>>()});
        }
        return r;
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("malformed report: {}", e.what()));
    }
}

RenderStyle parse_render_style(std::string_view name) {
    if (name == "json") return RenderStyle::Json;
    if (name == "table") return RenderStyle::Table;
    throw ArgumentError(fmt::format("style must be json or table, got '{}'", name));
}

namespace {

std::string layout(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        if (width.size() < r.size()) width.resize(r.size(), 0);
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c > 0) line += "  ";
            line += r[c];
            line.append(width[c] - r[c].size(), ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

std::string fixed(const std::optional<double>& v, int decimals) {
    return v ? fmt::format("{:.{}f}", *v, decimals) : "-";
}

std::string bracketed(const std::optional<MeanStd>& m) {
    return m ? fmt::format("{:.3f} [{:.3f}]", m->mean, m->std) : "-";
}

std::string tstr_cell(const stats::TstrReport* r, const std::string& target) {
    if (r == nullptr) return "-";
    for (const auto& t : r->targets) {
        if (t.name == target && t.mean && t.std) return stats::format_mean_std(*t.mean, *t.std);
    }
    return "-";
}

}  // namespace

std::string render_tstr_table(const stats::TstrReport& r, const std::string& column) {
    std::vector<std::vector<std::string>> rows = {{"Target", "Metric", column}};
    for (const auto& t : r.targets) rows.push_back({t.name, t.metric, tstr_cell(&r, t.name)});
    return layout(rows);
}

std::string render_report(const MetricReport& r, RenderStyle style) {
    if (style == RenderStyle::Json) return report_to_json(r);

    const bool any_edge = std::any_of(r.models.begin(), r.models.end(),
                                      [](const ModelReport& m) { return m.fidelity.edge_loss.has_value(); });
    std::vector<std::vector<std::string>> fidelity = {{"Model", "FID", "MMD", "MS-SSIM"}};
    if (any_edge) fidelity.front().push_back("Edge loss");
    for (const auto& m : r.models) {
        std::vector<std::string> row = {m.name, fixed(m.fidelity.fid, 2), fixed(m.fidelity.mmd, 3),
                                        bracketed(m.fidelity.msssim)};
        if (any_edge) row.push_back(bracketed(m.fidelity.edge_loss));
        fidelity.push_back(std::move(row));
    }
    std::string out = layout(fidelity);

    std::string matches;
    for (const auto& m : r.models) {
        if (m.permutation) {
            matches += fmt::format("{} of {}\n", stats::format_match_summary(m.name, *m.permutation),
                                   m.permutation->features.size());
        }
    }
    if (!matches.empty()) out += "\n" + matches;

    std::vector<std::string> target_names;
    std::vector<std::string> target_metrics;
    auto collect = [&](const stats::TstrReport& t) {
        for (const auto& x : t.targets) {
            if (std::find(target_names.begin(), target_names.end(), x.name) == target_names.end()) {
                target_names.push_back(x.name);
                target_metrics.push_back(x.metric);
            }
        }
    };
    if (r.real_tstr) collect(*r.real_tstr);
    for (const auto& m : r.models) {
        if (m.tstr) collect(*m.tstr);
    }
    if (!target_names.empty()) {
        std::vector<std::vector<std::string>> table(1, {"Target", "Metric"});
        if (r.real_tstr) table.front().push_back("Real");
        for (const auto& m : r.models) {
            if (m.tstr) table.front().push_back(m.name);
        }
        for (std::size_t i = 0; i < target_names.size(); ++i) {
            std::vector<std::string> row = {target_names[i], target_metrics[i]};
            if (r.real_tstr) row.push_back(tstr_cell(&*r.real_tstr, target_names[i]));
            for (const auto& m : r.models) {
                if (m.tstr) row.push_back(tstr_cell(&*m.tstr, target_names[i]));
            }
            table.push_back(std::move(row));
        }
        out += "\n" + layout(table);
    }

    for (const auto& s : r.stages) {
        if (s.status == "ok") continue;
        out += fmt::format("\nstage {} {}", s.stage, s.status);
        for (const auto& msg : s.messages) out += "\n  " + msg;
        out += "\n";
    }
    return out;
}

}  // namespace fundval::app
