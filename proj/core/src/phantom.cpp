#include "fundval/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <random>

#include "fundval/csv.hpp"
#include "fundval/embedding.hpp"
#include "fundval/error.hpp"

namespace fundval::phantom {

using morph::BinaryMask;

img::GrayImage line_image(int width, int height, int line_width) {
    if (width < 1 || height < 1 || line_width < 1 || line_width > width) {
        throw ArgumentError("line_image: bad geometry");
    }
    img::GrayImage g(width, height, 1.0);
    const int x0 = (width - line_width) / 2;
    for (int y = 0; y < height; ++y) {
        for (int x = x0; x < x0 + line_width; ++x) g.at(x, y) = 0.0;
    }
    return g;
}

BinaryMask filled_square(int size, int side) {
    if (side > size || side < 0) throw ArgumentError("filled_square: side exceeds frame");
    BinaryMask m(size, size);
    const int o = (size - side) / 2;
    for (int y = o; y < o + side; ++y) {
        for (int x = o; x < o + side; ++x) m.set(x, y);
    }
    return m;
}

BinaryMask horizontal_strip(int width, int height, int strip_width, int margin) {
    if (strip_width > height || 2 * margin >= width) throw ArgumentError("horizontal_strip: bad geometry");
    BinaryMask m(width, height);
    const int y0 = (height - strip_width) / 2;
    for (int y = y0; y < y0 + strip_width; ++y) {
        for (int x = margin; x < width - margin; ++x) m.set(x, y);
    }
    return m;
}

BinaryMask filled_disc(int width, int height, double cx, double cy, double radius) {
    BinaryMask m(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            if (dx * dx + dy * dy <= radius * radius) m.set(x, y);
        }
    }
    return m;
}

BinaryMask line_mask(int width, int height, int x0, int y0, int x1, int y1) {
    BinaryMask m(width, height);
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        if (x0 >= 0 && y0 >= 0 && x0 < width && y0 < height) m.set(x0, y0);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
    return m;
}

namespace {

struct Pt {
    double x, y;
};

void subdivide(Pt a, Pt b, Pt c, int depth, std::vector<std::array<Pt, 3>>& out) {
    if (depth == 0) {
        out.push_back({a, b, c});
        return;
    }
    const Pt ab{(a.x + b.x) / 2, (a.y + b.y) / 2};
    const Pt bc{(b.x + c.x) / 2, (b.y + c.y) / 2};
    const Pt ca{(c.x + a.x) / 2, (c.y + a.y) / 2};
    subdivide(a, ab, ca, depth - 1, out);
    subdivide(ab, b, bc, depth - 1, out);
    subdivide(ca, bc, c, depth - 1, out);
}

void fill_triangle(BinaryMask& m, const std::array<Pt, 3>& t) {
    auto side = [](Pt p, Pt q, double x, double y) { return (x - q.x) * (p.y - q.y) - (p.x - q.x) * (y - q.y); };
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min({t[0].x, t[1].x, t[2].x}))));
    const int x1 = std::min(m.width, static_cast<int>(std::ceil(std::max({t[0].x, t[1].x, t[2].x}))));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min({t[0].y, t[1].y, t[2].y}))));
    const int y1 = std::min(m.height, static_cast<int>(std::ceil(std::max({t[0].y, t[1].y, t[2].y}))));
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const double px = x + 0.5;
            const double py = y + 0.5;
            const double d1 = side(t[0], t[1], px, py);
            const double d2 = side(t[1], t[2], px, py);
            const double d3 = side(t[2], t[0], px, py);
            const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
            const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
            if (!(neg && pos)) m.set(x, y);
        }
    }
}

}  // namespace

BinaryMask sierpinski_triangle(int order, int size) {
    if (order < 0 || order > 10 || size < 1) throw ArgumentError("sierpinski_triangle: bad order or size");
    const double s = size;
    std::vector<std::array<Pt, 3>> tris;
    subdivide({0, s}, {s, s}, {0, 0}, order, tris);
    BinaryMask m(size, size);
    for (const auto& t : tris) fill_triangle(m, t);
    return m;
}

void draw_segment(BinaryMask& m, double x0, double y0, double x1, double y1, double half_width) {
    const double vx = x1 - x0;
    const double vy = y1 - y0;
    const double len2 = vx * vx + vy * vy;
    const int bx0 = std::max(0, static_cast<int>(std::floor(std::min(x0, x1) - half_width - 1)));
    const int bx1 = std::min(m.width - 1, static_cast<int>(std::ceil(std::max(x0, x1) + half_width + 1)));
    const int by0 = std::max(0, static_cast<int>(std::floor(std::min(y0, y1) - half_width - 1)));
    const int by1 = std::min(m.height - 1, static_cast<int>(std::ceil(std::max(y0, y1) + half_width + 1)));
    for (int y = by0; y <= by1; ++y) {
        for (int x = bx0; x <= bx1; ++x) {
            double t = len2 > 0 ? ((x - x0) * vx + (y - y0) * vy) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const double dx = x - (x0 + t * vx);
            const double dy = y - (y0 + t * vy);
            if (dx * dx + dy * dy <= half_width * half_width) m.set(x, y);
        }
    }
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Box-Muller on our own uniforms so the cohort is identical across
// standard library implementations.
double normal(std::mt19937_64& rng) {
    const double u1 = 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

FundusSample make_sample(const CohortOptions& opts, int index, const Eigen::MatrixXd& mixing) {
    std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index));
    const int s = opts.size;
    FundusSample f;
    f.id = fmt::format("{}{:03d}", opts.id_prefix, index);
    f.traits.age = uniform(rng, 40.0, 70.0);
    f.traits.sex = index % 2;

    const double cx = s * 0.5 + uniform(rng, -0.03, 0.03) * s;
    const double cy = s * 0.5 + uniform(rng, -0.03, 0.03) * s;
    const double disc_r = s * (0.075 + 0.012 * f.traits.sex) + uniform(rng, -1.0, 1.0);
    const double cup_r = disc_r * uniform(rng, 0.3, 0.5);
    f.disc = filled_disc(s, s, cx, cy, disc_r);
    f.cup = filled_disc(s, s, cx, cy, cup_r);

    const double artery_half = opts.width_scale * (0.9 + 0.9 * (f.traits.age - 40.0) / 30.0);
    const double vein_half = artery_half * 1.35;
    f.artery = BinaryMask(s, s);
    f.vein = BinaryMask(s, s);
    const double r0 = disc_r + 10.0;
    const double r1 = s * 0.45;
    for (int k = 0; k < 6; ++k) {
        const double deg = 60.0 * k + uniform(rng, -6.0, 6.0);
        const double a = deg * std::numbers::pi / 180.0;
        draw_segment(f.artery, cx + r0 * std::cos(a), cy + r0 * std::sin(a), cx + r1 * std::cos(a),
                     cy + r1 * std::sin(a), artery_half * uniform(rng, 0.85, 1.15));
        const double vdeg = 60.0 * k + 30.0 + uniform(rng, -6.0, 6.0);
        const double v = vdeg * std::numbers::pi / 180.0;
        draw_segment(f.vein, cx + r0 * std::cos(v), cy + r0 * std::sin(v), cx + r1 * std::cos(v),
                     cy + r1 * std::sin(v), vein_half * uniform(rng, 0.85, 1.15));
    }
    f.vessel = BinaryMask(s, s);
    for (std::size_t i = 0; i < f.vessel.data.size(); ++i) f.vessel.data[i] = f.artery.data[i] | f.vein.data[i];

    f.image = img::RasterImage(s, s, 3);
    const double rad = s * 0.5;
    for (int y = 0; y < s; ++y) {
        for (int x = 0; x < s; ++x) {
            const double d2 = ((x - s * 0.5) * (x - s * 0.5) + (y - s * 0.5) * (y - s * 0.5)) / (rad * rad);
            const double shade = d2 > 1.0 ? 0.0 : 1.0 - 0.3 * d2;
            double rgb[3] = {0.75 * shade, 0.45 * shade, 0.25 * shade};
            if (f.disc.at(x, y)) {
                rgb[0] = 0.95;
                rgb[1] = 0.82;
                rgb[2] = 0.6;
            }
            if (f.cup.at(x, y)) {
                rgb[0] = 1.0;
                rgb[1] = 0.95;
                rgb[2] = 0.8;
            }
            const double darken = f.vein.at(x, y) ? 0.4 : (f.artery.at(x, y) ? 0.55 : 1.0);
            for (int c = 0; c < 3; ++c) {
                const double v = rgb[c] * darken + opts.noise * normal(rng);
                f.image.at(x, y, c) = std::clamp(v, 0.0, 1.0);
            }
        }
    }

    Eigen::VectorXd latent(4);
    latent << (f.traits.age - 55.0) / 10.0, f.traits.sex - 0.5, 4.0 * (opts.width_scale - 1.0), disc_r / s * 10.0;
    f.embedding = mixing * latent;
    for (Eigen::Index j = 0; j < f.embedding.size(); ++j) f.embedding(j) += 0.3 * normal(rng);
    return f;
}

}  // namespace

std::vector<FundusSample> make_cohort(const CohortOptions& opts) {
    if (opts.count < 1 || opts.size < 64 || opts.embedding_dim < 1) throw ArgumentError("make_cohort: bad options");
    // Shared across cohorts so real and synthetic embeddings live in one space.
    std::mt19937_64 mix_rng(7);
    Eigen::MatrixXd mixing(opts.embedding_dim, 4);
    for (Eigen::Index i = 0; i < mixing.size(); ++i) mixing.data()[i] = normal(mix_rng);
    std::vector<FundusSample> out(static_cast<std::size_t>(opts.count));
    for (int i = 0; i < opts.count; ++i) out[static_cast<std::size_t>(i)] = make_sample(opts, i, mixing);
    return out;
}

void write_cohort(const std::filesystem::path& dir, const std::vector<FundusSample>& cohort) {
    namespace fs = std::filesystem;
    if (cohort.empty()) throw ArgumentError("write_cohort: empty cohort");
    fs::create_directories(dir / "images");
    fs::create_directories(dir / "masks");
    CsvTable manifest;
    manifest.header = {"id", "image", "vessel", "artery", "vein", "disc", "cup", "embedding_row"};
    CsvTable targets;
    targets.header = {"id", "age", "sex"};
    Eigen::MatrixXd emb(static_cast<Eigen::Index>(cohort.size()), cohort.front().embedding.size());
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        const FundusSample& f = cohort[i];
        const std::string image = "images/" + f.id + ".png";
        img::write_image(dir / image, f.image);
        std::vector<std::string> row = {f.id, image};
        const std::pair<const char*, const BinaryMask*> masks[] = {
            {"vessel", &f.vessel}, {"artery", &f.artery}, {"vein", &f.vein}, {"disc", &f.disc}, {"cup", &f.cup}};
        for (const auto& [name, m] : masks) {
            const std::string rel = fmt::format("masks/{}_{}.png", f.id, name);
            img::write_image(dir / rel, morph::mask_to_image(*m));
            row.push_back(rel);
        }
        row.push_back(std::to_string(i));
        manifest.rows.push_back(std::move(row));
        targets.rows.push_back({f.id, fmt::format("{:.2f}", f.traits.age), std::to_string(f.traits.sex)});
        emb.row(static_cast<Eigen::Index>(i)) = f.embedding.transpose();
    }
    write_csv(dir / "manifest.csv", manifest);
    write_csv(dir / "targets.csv", targets);
    metrics::write_fef(dir / "embeddings.fef", emb);
}

void write_demo_dataset(const std::filesystem::path& root, int per_group, int size, std::uint64_t seed) {
    CohortOptions real;
    real.count = per_group;
    real.size = size;
    real.seed = seed;
    real.id_prefix = "real";
    CohortOptions synth = real;
    synth.seed = seed + 7919;
    synth.id_prefix = "gen";
    synth.width_scale = 0.92;
    synth.noise = 0.005;
    write_cohort(root / "real", make_cohort(real));
    write_cohort(root / "synth", make_cohort(synth));
    write_text_file(root / "config.json", R"({
  "real_manifest": "real/manifest.csv",
  "real_embeddings": "real/embeddings.fef",
  "real_targets": "real/targets.csv",
  "synth_manifests": [
    {
      "name": "Phantom generator",
      "manifest": "synth/manifest.csv",
      "embeddings": "synth/embeddings.fef",
      "targets": "synth/targets.csv"
    }
  ],
  "metrics": ["fid", "mmd", "msssim", "edge_loss", "morphology", "permutation", "tstr"],
  "scales": [1, 2, 3],
  "mmd": {"bandwidth": "median", "estimator": "unbiased"},
  "permutation": {"n_permutations": 10000, "threshold": 0.05, "seed": 1},
  "tstr": {"targets": "age:cont,sex:bin", "repeats": 5, "seed": 1, "ridge_lambda": 1.0},
  "output_dir": "out"
}
)");
}

}  // namespace fundval::phantom
