#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fundval/image.hpp"

namespace fundval::metrics {

/// n x d matrix of finite embeddings, one sample per row.
class EmbeddingSet {
public:
    EmbeddingSet() = default;
    /// Throws ArgumentError if empty or any entry is non-finite.
    explicit EmbeddingSet(Eigen::MatrixXd rows);

    /// Flattens each image row-major into one row (green channel for RGB).
    static EmbeddingSet from_images(std::span<const img::RasterImage> images);

    [[nodiscard]] Eigen::Index n() const { return rows_.rows(); }
    [[nodiscard]] Eigen::Index d() const { return rows_.cols(); }
    [[nodiscard]] const Eigen::MatrixXd& matrix() const { return rows_; }
    [[nodiscard]] Eigen::VectorXd row(Eigen::Index i) const { return rows_.row(i).transpose(); }

private:
    Eigen::MatrixXd rows_;
};

// FEF1 container: "FEF1", u32 n, u32 d (little-endian), then n*d
// little-endian float32 values row-major.
std::vector<std::uint8_t> encode_fef(const Eigen::MatrixXd& m);
Eigen::MatrixXd decode_fef(std::span<const std::uint8_t> bytes);
Eigen::MatrixXd read_fef(const std::filesystem::path& path);
void write_fef(const std::filesystem::path& path, const Eigen::MatrixXd& m);

/// CSV with a header row and one sample per line. A leading column named
/// "id" is skipped.
Eigen::MatrixXd read_embedding_csv(const std::filesystem::path& path);

/// .fef by signature, anything else parsed as CSV.
Eigen::MatrixXd read_embeddings(const std::filesystem::path& path);

}  // namespace fundval::metrics
