#include "fundval/mask.hpp"

#include <algorithm>

#include "fundval/error.hpp"

namespace fundval::morph {

BinaryMask::BinaryMask(int w, int h, bool fill) : width(w), height(h) {
    if (w < 0 || h < 0) throw ArgumentError("BinaryMask: negative size");
    data.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count_if(data.begin(), data.end(), [](std::uint8_t v) { return v != 0; }));
}

BinaryMask mask_from_image(const img::RasterImage& image) {
    BinaryMask m(image.width, image.height);
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        // 8-bit value > 127 <=> v*255 > 127.5
        m.data[i] = image.data[i * image.channels] * 255.0 > 127.5 ? 1 : 0;
    }
    return m;
}

BinaryMask read_mask(const std::filesystem::path& path) { return mask_from_image(img::read_image(path)); }

img::GrayImage mask_to_image(const BinaryMask& m) {
    img::GrayImage g(m.width, m.height);
    for (std::size_t i = 0; i < m.data.size(); ++i) g.data[i] = m.data[i] ? 1.0 : 0.0;
    return g;
}

std::vector<BinaryMask> connected_components(const BinaryMask& m) {
    std::vector<int> label(m.data.size(), -1);
    std::vector<BinaryMask> comps;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < m.data.size(); ++start) {
        if (!m.data[start] || label[start] >= 0) continue;
        const int id = static_cast<int>(comps.size());
        comps.emplace_back(m.width, m.height);
        BinaryMask& c = comps.back();
        stack.push_back(start);
        label[start] = id;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            c.data[p] = 1;
            const int x = static_cast<int>(p % static_cast<std::size_t>(m.width));
            const int y = static_cast<int>(p / static_cast<std::size_t>(m.width));
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (!m.get_or_background(nx, ny)) continue;
                    const std::size_t q = static_cast<std::size_t>(ny) * m.width + nx;
                    if (label[q] < 0) {
                        label[q] = id;
                        stack.push_back(q);
                    }
                }
            }
        }
    }
    return comps;
}

BinaryMask rotate90(const BinaryMask& m) {
    BinaryMask out(m.height, m.width);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (m.at(x, y)) out.set(m.height - 1 - y, x);
        }
    }
    return out;
}

BinaryMask translate(const BinaryMask& m, int dx, int dy) {
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y)) continue;
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx >= 0 && ny >= 0 && nx < m.width && ny < m.height) out.set(nx, ny);
        }
    }
    return out;
}

}  // namespace fundval::morph
