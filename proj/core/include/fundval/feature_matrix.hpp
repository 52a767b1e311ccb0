#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fundval::stats {

/// Named-column table of per-sample features with explicit missing cells.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    /// Throws ArgumentError on duplicate column names.
    explicit FeatureMatrix(std::vector<std::string> columns);

    void add_row(std::vector<std::optional<double>> values, std::string id = {});

    [[nodiscard]] std::size_t rows() const { return ids_.size(); }
    [[nodiscard]] std::size_t cols() const { return columns_.size(); }
    [[nodiscard]] const std::vector<std::string>& column_names() const { return columns_; }
    [[nodiscard]] const std::vector<std::string>& ids() const { return ids_; }
    [[nodiscard]] std::optional<std::size_t> find_column(const std::string& name) const;
    [[nodiscard]] std::optional<std::size_t> find_row(const std::string& id) const;

    [[nodiscard]] const std::optional<double>& at(std::size_t r, std::size_t c) const {
        return cells_[r * columns_.size() + c];
    }
    std::optional<double>& at(std::size_t r, std::size_t c) { return cells_[r * columns_.size() + c]; }

    /// Non-missing values of column c in row order.
    [[nodiscard]] std::vector<double> column_values(std::size_t c) const;

    /// Rows whose listed columns are all present, as a dense matrix.
    [[nodiscard]] Eigen::MatrixXd dense(const std::vector<std::size_t>& rows,
                                        const std::vector<std::size_t>& cols) const;

    bool operator==(const FeatureMatrix&) const = default;

private:
    std::vector<std::string> columns_;
    std::vector<std::string> ids_;
    std::vector<std::optional<double>> cells_;
};

/// CSV with a header row; an "id" first column is kept as row ids and empty
/// cells are missing.
FeatureMatrix read_feature_csv(const std::filesystem::path& path);
FeatureMatrix parse_feature_csv(const std::string& text);
std::string format_feature_csv(const FeatureMatrix& fm);

}  // namespace fundval::stats
