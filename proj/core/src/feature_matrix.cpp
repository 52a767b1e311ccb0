#include "fundval/feature_matrix.hpp"

#include <set>

#include "fundval/csv.hpp"
#include "fundval/error.hpp"

namespace fundval::stats {

FeatureMatrix::FeatureMatrix(std::vector<std::string> columns) : columns_(std::move(columns)) {
    std::set<std::string> seen;
    for (const auto& c : columns_) {
        if (!seen.insert(c).second) throw ArgumentError("FeatureMatrix: duplicate column '" + c + "'");
    }
}

void FeatureMatrix::add_row(std::vector<std::optional<double>> values, std::string id) {
    if (values.size() != columns_.size()) {
        throw ArgumentError("FeatureMatrix: row has " + std::to_string(values.size()) + " values, expected " +
                            std::to_string(columns_.size()));
    }
    if (id.empty()) id = std::to_string(ids_.size());
    ids_.push_back(std::move(id));
    cells_.insert(cells_.end(), values.begin(), values.end());
}

std::optional<std::size_t> FeatureMatrix::find_column(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> FeatureMatrix::find_row(const std::string& id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (ids_[i] == id) return i;
    }
    return std::nullopt;
}

std::vector<double> FeatureMatrix::column_values(std::size_t c) const {
    std::vector<double> out;
    out.reserve(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
        if (const auto& v = at(r, c)) out.push_back(*v);
    }
    return out;
}

Eigen::MatrixXd FeatureMatrix::dense(const std::vector<std::size_t>& rows,
                                     const std::vector<std::size_t>& cols) const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const auto& v = at(rows[i], cols[j]);
            if (!v) throw ArgumentError("FeatureMatrix::dense: missing cell");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
        }
    }
    return m;
}

FeatureMatrix parse_feature_csv(const std::string& text) {
    const CsvTable t = parse_csv(text);
    if (t.header.empty()) throw IoError("feature CSV: missing header");
    const bool has_id = t.header.front() == "id";
    std::vector<std::string> cols(t.header.begin() + (has_id ? 1 : 0), t.header.end());
    FeatureMatrix fm(std::move(cols));
    for (const auto& row : t.rows) {
        std::vector<std::optional<double>> values;
        values.reserve(fm.cols());
        for (std::size_t j = has_id ? 1 : 0; j < row.size(); ++j) values.push_back(parse_cell(row[j]));
        fm.add_row(std::move(values), has_id ? row.front() : std::string{});
    }
    return fm;
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
    return parse_feature_csv(read_text_file(path));
}

std::string format_feature_csv(const FeatureMatrix& fm) {
    CsvTable t;
    t.header.push_back("id");
    t.header.insert(t.header.end(), fm.column_names().begin(), fm.column_names().end());
    for (std::size_t r = 0; r < fm.rows(); ++r) {
        std::vector<std::string> row{fm.ids()[r]};
        for (std::size_t c = 0; c < fm.cols(); ++c) {
            const auto& v = fm.at(r, c);
            row.push_back(v ? format_double(*v) : std::string{});
        }
        t.rows.push_back(std::move(row));
    }
    return format_csv(t);
}

}  // namespace fundval::stats
