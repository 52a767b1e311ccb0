#include "fundval/embedding.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "fundval/csv.hpp"
#include "fundval/error.hpp"

namespace fundval::metrics {

EmbeddingSet::EmbeddingSet(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
    if (rows_.rows() < 1 || rows_.cols() < 1) {
        throw ArgumentError("EmbeddingSet: need at least one sample and one dimension");
    }
    if (!rows_.allFinite()) throw ArgumentError("EmbeddingSet: non-finite entry");
}

EmbeddingSet EmbeddingSet::from_images(std::span<const img::RasterImage> images) {
    if (images.empty()) throw ArgumentError("EmbeddingSet::from_images: no images");
    const int w = images.front().width;
    const int h = images.front().height;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(images.size()), static_cast<Eigen::Index>(w) * h);
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].width != w || images[i].height != h) {
            throw ArgumentError("EmbeddingSet::from_images: images differ in size");
        }
        const img::GrayImage g = img::green_channel(images[i]);
        for (std::size_t p = 0; p < g.data.size(); ++p) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = g.data[p];
        }
    }
    return EmbeddingSet(std::move(m));
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[off + i]) << (8 * i);
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode_fef(const Eigen::MatrixXd& m) {
    if (m.rows() > 0xFFFFFFFFLL || m.cols() > 0xFFFFFFFFLL) throw ArgumentError("FEF: matrix too large");
    std::vector<std::uint8_t> out{'F', 'E', 'F', '1'};
    out.reserve(12 + static_cast<std::size_t>(m.size()) * 4);
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const float f = static_cast<float>(m(i, j));
            put_u32(out, std::bit_cast<std::uint32_t>(f));
        }
    }
    return out;
}

Eigen::MatrixXd decode_fef(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "FEF1", 4) != 0) {
        throw DecodeError("FEF: missing FEF1 header");
    }
    const std::uint64_t n = get_u32(bytes, 4);
    const std::uint64_t d = get_u32(bytes, 8);
    if (bytes.size() != 12 + n * d * 4) {
        throw DecodeError("FEF: payload size does not match n*d float32 values");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::size_t off = 12;
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < d; ++j, off += 4) {
            const float f = std::bit_cast<float>(get_u32(bytes, off));
            if (!std::isfinite(f)) throw DecodeError("FEF: non-finite value");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f;
        }
    }
    return m;
}

Eigen::MatrixXd read_fef(const std::filesystem::path& path) {
    return decode_fef(img::read_file_bytes(path));
}

void write_fef(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    img::write_file_bytes(path, encode_fef(m));
}

Eigen::MatrixXd read_embedding_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    if (t.header.empty()) throw DecodeError("embedding CSV: empty file");
    const std::size_t first = (t.header.front() == "id") ? 1 : 0;
    const std::size_t d = t.header.size() - first;
    if (d == 0 || t.rows.empty()) throw DecodeError("embedding CSV: no data");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const auto v = parse_cell(t.rows[i][first + j]);
            if (!v) throw DecodeError("embedding CSV: missing value at row " + std::to_string(i + 1));
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
        }
    }
    return m;
}

Eigen::MatrixXd read_embeddings(const std::filesystem::path& path) {
    const auto bytes = img::read_file_bytes(path);
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), "FEF1", 4) == 0) return decode_fef(bytes);
    return read_embedding_csv(path);
}

}  // namespace fundval::metrics
