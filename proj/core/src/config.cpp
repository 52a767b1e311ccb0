#include "fundval/config.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <json.hpp>
#include <set>

#include "fundval/csv.hpp"
#include "fundval/error.hpp"

namespace fundval::app {

using nlohmann::json;

const std::array<Metric, 7>& all_metrics() {
    static const std::array<Metric, 7> kAll = {Metric::Fid,        Metric::Mmd,         Metric::Msssim, Metric::EdgeLoss,
                                               Metric::Morphology, Metric::Permutation, Metric::Tstr};
    return kAll;
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Fid: return "fid";
        case Metric::Mmd: return "mmd";
        case Metric::Msssim: return "msssim";
        case Metric::EdgeLoss: return "edge_loss";
        case Metric::Morphology: return "morphology";
        case Metric::Permutation: return "permutation";
        case Metric::Tstr: return "tstr";
    }
    return "?";
}

Metric parse_metric(std::string_view name) {
    for (Metric m : all_metrics()) {
        if (to_string(m) == name) return m;
    }
    throw ConfigError(fmt::format("unknown metric: {}", name));
}

bool PipelineConfig::enabled(Metric m) const { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); }

std::filesystem::path PipelineConfig::resolve(const std::filesystem::path& p) const {
    if (p.is_absolute() || base_dir.empty()) return p;
    return base_dir / p;
}

bool PipelineConfig::operator==(const PipelineConfig& o) const {
    return real == o.real && synth == o.synth && metrics == o.metrics && scales == o.scales && mmd == o.mmd &&
           permutation == o.permutation && tstr == o.tstr && output_dir == o.output_dir;
}

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(fmt::format("{} must be an object", where.empty() ? "config" : where));
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ConfigError(fmt::format("unknown key: {}{}", where.empty() ? "" : where + ".", key));
        }
    }
}

const json& require(const json& obj, const char* key, const std::string& where = {}) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(fmt::format("missing key: {}{}", where.empty() ? "" : where + ".", key));
    return *it;
}

std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError(fmt::format("wrong type for key: {}", key));
    return v.get<std::string>();
}

double get_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError(fmt::format("wrong type for key: {}", key));
    return v.get<double>();
}

std::int64_t get_integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError(fmt::format("wrong type for key: {}", key));
    return v.get<std::int64_t>();
}

std::uint64_t get_seed(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(fmt::format("wrong type for key: {} (expected non-negative integer)", key));
}

DatasetSpec parse_dataset(const json& obj, const std::string& where) {
    check_keys(obj, {"name", "manifest", "embeddings", "targets"}, where);
    DatasetSpec d;
    d.name = get_string(require(obj, "name", where), where + ".name");
    if (d.name.empty()) throw ConfigError(where + ".name must not be empty");
    d.manifest = get_string(require(obj, "manifest", where), where + ".manifest");
    if (obj.contains("embeddings")) d.embeddings = get_string(obj["embeddings"], where + ".embeddings");
    if (obj.contains("targets")) d.targets = get_string(obj["targets"], where + ".targets");
    return d;
}

json dataset_json(const DatasetSpec& d) {
    json j = {{"name", d.name}, {"manifest", d.manifest.generic_string()}};
    if (d.embeddings) j["embeddings"] = d.embeddings->generic_string();
    if (d.targets) j["targets"] = d.targets->generic_string();
    return j;
}

}  // namespace

PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    check_keys(doc,
               {"real_manifest", "real_embeddings", "real_targets", "synth_manifests", "metrics", "scales", "mmd",
                "permutation", "tstr", "output_dir"},
               "");
    PipelineConfig cfg;
    cfg.base_dir = base_dir;
    cfg.real.name = "Real";
    cfg.real.manifest = get_string(require(doc, "real_manifest"), "real_manifest");
    if (doc.contains("real_embeddings")) cfg.real.embeddings = get_string(doc["real_embeddings"], "real_embeddings");
    if (doc.contains("real_targets")) cfg.real.targets = get_string(doc["real_targets"], "real_targets");

    const json& synth = require(doc, "synth_manifests");
    if (!synth.is_array() || synth.empty()) throw ConfigError("synth_manifests must be a non-empty array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < synth.size(); ++i) {
        DatasetSpec d = parse_dataset(synth[i], fmt::format("synth_manifests[{}]", i));
        if (!names.insert(d.name).second) throw ConfigError(fmt::format("duplicate model name: {}", d.name));
        cfg.synth.push_back(std::move(d));
    }

    if (doc.contains("metrics")) {
        const json& m = doc["metrics"];
        if (!m.is_array()) throw ConfigError("wrong type for key: metrics");
        std::set<Metric> chosen;
        for (const auto& item : m) chosen.insert(parse_metric(get_string(item, "metrics[]")));
        for (Metric x : all_metrics()) {
            if (chosen.count(x)) cfg.metrics.push_back(x);
        }
    } else {
        cfg.metrics.assign(all_metrics().begin(), all_metrics().end());
    }

    if (doc.contains("scales")) {
        const json& s = doc["scales"];
        if (!s.is_array() || s.empty()) throw ConfigError("scales must be a non-empty array");
        cfg.scales.clear();
        for (const auto& v : s) cfg.scales.push_back(get_number(v, "scales[]"));
        for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
            if (!(cfg.scales[i] > 0.0) || (i > 0 && cfg.scales[i] <= cfg.scales[i - 1])) {
                throw ConfigError("scales must be positive and strictly increasing");
            }
        }
    }

    if (doc.contains("mmd")) {
        const json& m = doc["mmd"];
        check_keys(m, {"bandwidth", "estimator"}, "mmd");
        if (m.contains("bandwidth")) {
            const json& b = m["bandwidth"];
            if (b.is_string()) {
                if (b.get<std::string>() != "median") throw ConfigError("mmd.bandwidth must be \"median\" or a number");
            } else {
                const double h = get_number(b, "mmd.bandwidth");
                if (!(h > 0.0)) throw ConfigError("mmd.bandwidth must be positive");
                cfg.mmd.bandwidth = h;
            }
        }
        if (m.contains("estimator")) {
            try {
                cfg.mmd.estimator = metrics::parse_estimator(get_string(m["estimator"], "mmd.estimator"));
            } catch (const ArgumentError& e) {
                throw ConfigError(e.what());
            }
        }
    }

    if (doc.contains("permutation")) {
        const json& p = doc["permutation"];
        check_keys(p, {"n_permutations", "threshold", "seed"}, "permutation");
        if (p.contains("n_permutations")) {
            const auto n = get_integer(p["n_permutations"], "permutation.n_permutations");
            if (n < 1 || n > 100000000) throw ConfigError("permutation.n_permutations out of range");
            cfg.permutation.n_permutations = static_cast<int>(n);
        }
        if (p.contains("threshold")) {
            cfg.permutation.threshold = get_number(p["threshold"], "permutation.threshold");
            if (!(cfg.permutation.threshold >= 0.0 && cfg.permutation.threshold < 1.0)) {
                throw ConfigError("permutation.threshold must lie in [0, 1)");
            }
        }
        if (p.contains("seed")) cfg.permutation.seed = get_seed(p["seed"], "permutation.seed");
    }

    if (doc.contains("tstr")) {
        const json& t = doc["tstr"];
        check_keys(t, {"targets", "repeats", "seed", "ridge_lambda", "train_fraction"}, "tstr");
        if (t.contains("targets")) cfg.tstr.targets = get_string(t["targets"], "tstr.targets");
        if (t.contains("repeats")) {
            const auto r = get_integer(t["repeats"], "tstr.repeats");
            if (r < 1 || r > 10000) throw ConfigError("tstr.repeats out of range");
            cfg.tstr.repeats = static_cast<int>(r);
        }
        if (t.contains("seed")) cfg.tstr.seed = get_seed(t["seed"], "tstr.seed");
        if (t.contains("ridge_lambda")) {
            cfg.tstr.ridge_lambda = get_number(t["ridge_lambda"], "tstr.ridge_lambda");
            if (!(cfg.tstr.ridge_lambda >= 0.0)) throw ConfigError("tstr.ridge_lambda must be >= 0");
        }
        if (t.contains("train_fraction")) {
            cfg.tstr.train_fraction = get_number(t["train_fraction"], "tstr.train_fraction");
            if (!(cfg.tstr.train_fraction > 0.0 && cfg.tstr.train_fraction <= 1.0)) {
                throw ConfigError("tstr.train_fraction must lie in (0, 1]");
            }
        }
    }

    if (doc.contains("output_dir")) cfg.output_dir = get_string(doc["output_dir"], "output_dir");
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text, std::filesystem::absolute(path).parent_path());
}

std::string serialize_config(const PipelineConfig& cfg) {
    json doc;
    doc["real_manifest"] = cfg.real.manifest.generic_string();
    if (cfg.real.embeddings) doc["real_embeddings"] = cfg.real.embeddings->generic_string();
    if (cfg.real.targets) doc["real_targets"] = cfg.real.targets->generic_string();
    doc["synth_manifests"] = json::array();
    for (const auto& d : cfg.synth) doc["synth_manifests"].push_back(dataset_json(d));
    doc["metrics"] = json::array();
    for (Metric m : cfg.metrics) doc["metrics"].push_back(to_string(m));
    doc["scales"] = cfg.scales;
    doc["mmd"] = {{"estimator", metrics::to_string(cfg.mmd.estimator)}};
    if (cfg.mmd.bandwidth) {
        doc["mmd"]["bandwidth"] = *cfg.mmd.bandwidth;
    } else {
        doc["mmd"]["bandwidth"] = "median";
    }
    doc["permutation"] = {{"n_permutations", cfg.permutation.n_permutations},
                          {"threshold", cfg.permutation.threshold},
                          {"seed", cfg.permutation.seed}};
    doc["tstr"] = {{"targets", cfg.tstr.targets},
                   {"repeats", cfg.tstr.repeats},
                   {"seed", cfg.tstr.seed},
                   {"ridge_lambda", cfg.tstr.ridge_lambda},
                   {"train_fraction", cfg.tstr.train_fraction}};
    doc["output_dir"] = cfg.output_dir.generic_string();
    return doc.dump(2) + "\n";
}

std::string config_hash(const PipelineConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_config(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

void validate_paths(const PipelineConfig& cfg) {
    auto check = [&](const std::filesystem::path& p, const std::string& what) {
        if (!std::filesystem::exists(cfg.resolve(p))) {
            throw ConfigError(fmt::format("{} not found: {}", what, cfg.resolve(p).string()));
        }
    };
    std::vector<const DatasetSpec*> all = {&cfg.real};
    for (const auto& d : cfg.synth) all.push_back(&d);
    for (const DatasetSpec* d : all) {
        check(d->manifest, d->name + " manifest");
        if (d->embeddings) check(*d->embeddings, d->name + " embeddings");
        if (d->targets) check(*d->targets, d->name + " targets");
    }
}

}  // namespace fundval::app
