#include <algorithm>
#include <cmath>
#include <functional>

#include "fundval/error.hpp"
#include "fundval/morphology.hpp"

namespace fundval::morph {

WidthStats vessel_width_stats(const BinaryMask& mask) {
    WidthStats s;
    if (mask.empty_foreground()) return s;
    const BinaryMask skel = skeletonize(mask);
    const img::GrayImage edt = euclidean_distance_transform(mask);
    std::vector<double> widths;
    for (std::size_t i = 0; i < skel.data.size(); ++i) {
        if (skel.data[i]) widths.push_back(2.0 * edt.data[i] - 1.0);
    }
    s.skeleton_pixels = widths.size();
    if (widths.empty()) return s;
    double sum = 0.0;
    for (double w : widths) sum += w;
    s.mean_width = sum / static_cast<double>(widths.size());
    double ss = 0.0;
    for (double w : widths) ss += (w - s.mean_width) * (w - s.mean_width);
    s.std_width = std::sqrt(ss / static_cast<double>(widths.size()));
    return s;
}

double vessel_density(const BinaryMask& mask) {
    if (mask.data.empty()) throw ArgumentError("vessel_density: empty frame");
    return static_cast<double>(mask.count()) / static_cast<double>(mask.data.size());
}

std::vector<BoxCount> box_counts(const BinaryMask& mask) {
    const int side = std::min(mask.width, mask.height);
    std::vector<BoxCount> counts;
    if (side < 8) return counts;
    const int max_j = static_cast<int>(std::floor(std::log2(side / 4.0)));
    for (int j = 1; j <= max_j; ++j) {
        const int s = 1 << j;
        const int nx = (mask.width + s - 1) / s;
        const int ny = (mask.height + s - 1) / s;
        std::vector<std::uint8_t> occupied(static_cast<std::size_t>(nx) * ny, 0);
        for (int y = 0; y < mask.height; ++y) {
            for (int x = 0; x < mask.width; ++x) {
                if (mask.at(x, y)) occupied[static_cast<std::size_t>(y / s) * nx + x / s] = 1;
            }
        }
        counts.push_back({s, static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), 1))});
    }
    return counts;
}

double fractal_dimension(const BinaryMask& mask) {
    if (mask.empty_foreground()) throw ArgumentError("fractal_dimension: empty mask");
    const auto counts = box_counts(mask);
    if (counts.size() < 3) {
        throw ArgumentError("fractal_dimension: fewer than 3 box sizes fit (min side must be >= 32)");
    }
    const auto n = static_cast<double>(counts.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& c : counts) {
        const double x = -std::log(static_cast<double>(c.box_size));
        const double y = std::log(static_cast<double>(c.occupied));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

struct Bounds {
    int x0, y0, x1, y1;
    [[nodiscard]] int width() const { return x1 - x0 + 1; }
    [[nodiscard]] int height() const { return y1 - y0 + 1; }
};

std::optional<Bounds> bounding_box(const BinaryMask& m) {
    std::optional<Bounds> b;
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y)) continue;
            if (!b) {
                b = Bounds{x, y, x, y};
            } else {
                b->x0 = std::min(b->x0, x);
                b->x1 = std::max(b->x1, x);
                b->y0 = std::min(b->y0, y);
                b->y1 = std::max(b->y1, y);
            }
        }
    }
    return b;
}

}  // namespace

DiscCupGeometry disc_cup_geometry(const BinaryMask& disc, const BinaryMask& cup) {
    const auto db = bounding_box(disc);
    if (!db) throw ArgumentError("disc_cup_geometry: disc mask is empty");
    DiscCupGeometry g;
    g.disc_height = db->height();
    g.disc_width = db->width();
    if (const auto cb = bounding_box(cup)) {
        g.cup_height = cb->height();
        g.cup_width = cb->width();
        g.vertical_cup_disc_ratio = static_cast<double>(cb->height()) / db->height();
    }
    return g;
}

double knudtson_combine(std::span<const double> widths, double coefficient) {
    if (widths.empty()) throw ArgumentError("knudtson_combine: no widths");
    std::vector<double> cur(widths.begin(), widths.end());
    while (cur.size() > 1) {
        std::sort(cur.begin(), cur.end(), std::greater<>());
        const std::size_t n = cur.size();
        std::vector<double> next;
        next.reserve(n / 2 + 1);
        for (std::size_t i = 0; i < n / 2; ++i) {
            const double big = cur[i];
            const double small = cur[n - 1 - i];
            next.push_back(coefficient * std::sqrt(big * big + small * small));
        }
        if (n % 2 == 1) next.push_back(cur[n / 2]);
        cur = std::move(next);
    }
    return cur.front();
}

namespace {
void check_six(std::span<const double> w, const char* what) {
    if (w.size() != 6) {
        throw ArgumentError(std::string("vascular_equivalents: expected six ") + what + " widths, got " +
                            std::to_string(w.size()));
    }
    for (double v : w) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ArgumentError(std::string("vascular_equivalents: non-positive ") + what + " width");
        }
    }
}
}  // namespace

VascularEquivalents vascular_equivalents(std::span<const double> arteriole_widths,
                                         std::span<const double> venule_widths) {
    check_six(arteriole_widths, "arteriole");
    check_six(venule_widths, "venule");
    VascularEquivalents v;
    v.crae = knudtson_combine(arteriole_widths, kArterioleCoefficient);
    v.crve = knudtson_combine(venule_widths, kVenuleCoefficient);
    v.avr = v.crae / v.crve;
    return v;
}

const std::array<std::string, 11>& RetinalFeatureRow::names() {
    static const std::array<std::string, 11> kNames = {
        "vessel_density", "fractal_dimension", "mean_vessel_width", "disc_height",
        "disc_width",     "cup_height",        "cup_width",         "vertical_cup_disc_ratio",
        "crae",           "crve",              "avr"};
    return kNames;
}

std::array<std::optional<double>, 11> RetinalFeatureRow::values() const {
    return {vessel_density, fractal_dimension, mean_vessel_width,       disc_height,
            disc_width,     cup_height,        cup_width,               vertical_cup_disc_ratio,
            crae,           crve,              avr};
}

std::vector<double> six_widest_component_widths(const BinaryMask& mask) {
    const auto comps = connected_components(mask);
    if (comps.size() < 6) {
        throw ArgumentError("need at least six vessel segments, found " + std::to_string(comps.size()));
    }
    std::vector<double> widths;
    widths.reserve(comps.size());
    for (const auto& c : comps) widths.push_back(vessel_width_stats(c).mean_width);
    std::sort(widths.begin(), widths.end(), std::greater<>());
    widths.resize(6);
    return widths;
}

namespace {
std::optional<double> try_value(const std::function<double()>& f) {
    try {
        return f();
    } catch (const ArgumentError&) {
        return std::nullopt;
    }
}
bool has_content(const std::optional<BinaryMask>& m) { return m && !m->empty_foreground(); }
}  // namespace

RetinalFeatureRow extract_feature_row(const MaskBundle& masks) {
    const bool vessel = !masks.vessel.empty_foreground();
    if (!vessel && !has_content(masks.artery) && !has_content(masks.vein) && !has_content(masks.disc) &&
        !has_content(masks.cup)) {
        throw ArgumentError("extract_feature_row: all masks are empty");
    }

    RetinalFeatureRow row;
    if (!masks.vessel.data.empty()) row.vessel_density = vessel_density(masks.vessel);
    if (vessel) {
        row.fractal_dimension = try_value([&] { return fractal_dimension(masks.vessel); });
        const WidthStats ws = vessel_width_stats(masks.vessel);
        if (ws.skeleton_pixels > 0) row.mean_vessel_width = ws.mean_width;
    }

    if (has_content(masks.disc)) {
        const BinaryMask empty_cup(masks.disc->width, masks.disc->height);
        const DiscCupGeometry g = disc_cup_geometry(*masks.disc, masks.cup ? *masks.cup : empty_cup);
        row.disc_height = g.disc_height;
        row.disc_width = g.disc_width;
        if (g.cup_height) row.cup_height = *g.cup_height;
        if (g.cup_width) row.cup_width = *g.cup_width;
        row.vertical_cup_disc_ratio = g.vertical_cup_disc_ratio;
    }

    std::optional<std::vector<double>> art;
    std::optional<std::vector<double>> ven;
    if (masks.artery) {
        try {
            art = six_widest_component_widths(*masks.artery);
        } catch (const ArgumentError&) {
        }
    }
    if (masks.vein) {
        try {
            ven = six_widest_component_widths(*masks.vein);
        } catch (const ArgumentError&) {
        }
    }
    if (art) row.crae = knudtson_combine(*art, kArterioleCoefficient);
    if (ven) row.crve = knudtson_combine(*ven, kVenuleCoefficient);
    if (row.crae && row.crve) row.avr = *row.crae / *row.crve;
    return row;
}

}  // namespace fundval::morph
