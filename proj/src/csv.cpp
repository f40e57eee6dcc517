#include <springs/csv.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <springs/errors.h>

namespace springs {

std::string format_number(double value)
{
    if (std::isnan(value)) return {};
    std::array<char, 40> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                         std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size())
{
    add_row(header);
    rows_ = 0;
}

void CsvTable::add_row(std::span<const double> values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) {
        throw InvalidArgument("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(columns_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
    ++rows_;
}

void CsvTable::write(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text_;
    if (!out) throw ConfigError("cannot write " + path.string());
}

std::size_t CsvData::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw InvalidArgument("no column '" + name + "'");
}

CsvData read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    CsvData data;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (first) {
            data.header = std::move(cells);
            first = false;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) {
            double v = std::nan("");
            if (!c.empty()) std::from_chars(c.data(), c.data() + c.size(), v);
            row.push_back(v);
        }
        data.rows.push_back(std::move(row));
    }
    return data;
}

}  // namespace springs
