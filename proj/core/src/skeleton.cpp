#include <algorithm>
#include <vector>

#include "fundval/morphology.hpp"

namespace fundval::morph {

namespace {

// Neighbours p2..p9, clockwise from north.
constexpr int kDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

bool deletable(const BinaryMask& m, int x, int y, int pass) {
    int p[8];
    int b = 0;
    for (int k = 0; k < 8; ++k) {
        p[k] = m.get_or_background(x + kDx[k], y + kDy[k]) ? 1 : 0;
        b += p[k];
    }
    if (b < 2 || b > 6) return false;
    int a = 0;
    for (int k = 0; k < 8; ++k) a += (p[k] == 0 && p[(k + 1) % 8] == 1) ? 1 : 0;
    if (a != 1) return false;
    // p2=p[0], p4=p[2], p6=p[4], p8=p[6]
    if (pass == 0) return p[0] * p[2] * p[4] == 0 && p[2] * p[4] * p[6] == 0;
    return p[0] * p[2] * p[6] == 0 && p[0] * p[4] * p[6] == 0;
}

// Parallel deletion can erase a whole component at once (a 2x2 block is the
// classic case). Keep the first pixel of any component that would vanish.
void protect_vanishing_components(const BinaryMask& m, std::vector<std::uint8_t>& marked) {
    std::vector<int> label(m.data.size(), -1);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> members;
    for (std::size_t start = 0; start < m.data.size(); ++start) {
        if (!m.data[start] || label[start] >= 0) continue;
        bool survives = false;
        members.clear();
        stack.push_back(start);
        label[start] = 0;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            members.push_back(p);
            if (!marked[p]) survives = true;
            const int x = static_cast<int>(p % static_cast<std::size_t>(m.width));
            const int y = static_cast<int>(p / static_cast<std::size_t>(m.width));
            for (int k = 0; k < 8; ++k) {
                const int nx = x + kDx[k];
                const int ny = y + kDy[k];
                if (!m.get_or_background(nx, ny)) continue;
                const std::size_t q = static_cast<std::size_t>(ny) * m.width + nx;
                if (label[q] < 0) {
                    label[q] = 0;
                    stack.push_back(q);
                }
            }
        }
        if (!survives) {
            std::size_t first = members.front();
            for (std::size_t p : members) first = std::min(first, p);
            marked[first] = 0;
        }
    }
}

}  // namespace

BinaryMask skeletonize(const BinaryMask& mask) {
    BinaryMask m = mask;
    std::vector<std::uint8_t> marked(m.data.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            bool any = false;
            std::fill(marked.begin(), marked.end(), 0);
            for (int y = 0; y < m.height; ++y) {
                for (int x = 0; x < m.width; ++x) {
                    if (m.at(x, y) && deletable(m, x, y, pass)) {
                        marked[static_cast<std::size_t>(y) * m.width + x] = 1;
                        any = true;
                    }
                }
            }
            if (!any) continue;
            protect_vanishing_components(m, marked);
            for (std::size_t i = 0; i < m.data.size(); ++i) {
                if (marked[i]) {
                    m.data[i] = 0;
                    changed = true;
                }
            }
        }
    }
    return m;
}

}  // namespace fundval::morph
