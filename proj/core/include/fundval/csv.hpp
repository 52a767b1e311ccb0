#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fundval {

/// Header row plus string cells. Rows are padded or rejected so that every
/// row has header.size() cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::optional<std::size_t> find_column(std::string_view name) const;
    /// Throws IoError naming the column if absent.
    [[nodiscard]] std::size_t column(std::string_view name) const;
};

/// RFC 4180-style parsing: comma separated, double-quoted fields may hold
/// commas, quotes ("") and newlines. Blank lines are skipped.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

std::string format_csv(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Parses a finite double; nullopt for an empty cell, throws on garbage.
std::optional<double> parse_cell(std::string_view cell);

/// Shortest representation that round-trips through parse_cell.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace fundval
