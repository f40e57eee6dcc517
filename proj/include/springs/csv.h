#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace springs {

/// Shortest form with 17 significant digits, '.' decimal point; NaN prints empty.
std::string format_number(double value);

/// Buffered CSV table written with '\n' line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::span<const double> values);
    void add_row(const std::vector<std::string>& cells);
    std::size_t rows() const { return rows_; }
    const std::string& text() const { return text_; }

    void write(const std::filesystem::path& path) const;

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

/// Parses a table written by CsvTable; empty cells become NaN.
struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

CsvData read_csv(const std::filesystem::path& path);

}  // namespace springs
