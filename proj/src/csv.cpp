#include "resetlab/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "resetlab/errors.hpp"

namespace resetlab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double      v     = 0.0;
    const char* first = text.data();
    const char* last  = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw ConfigError("not a number: '" + text + "'");
    return v;
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
        throw ConfigError("csv row has " + std::to_string(row.size()) + " cells, header has " +
                          std::to_string(header.size()));
    rows.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ConfigError("csv column not found: " + name);
}

double CsvTable::number(std::size_t row, const std::string& name) const {
    return parse_double(rows.at(row).at(column(name)));
}

namespace {

void check_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") != std::string::npos) throw ConfigError("csv cell contains a separator: " + cell);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string              cell;
    std::istringstream       in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    auto write_line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            check_cell(cells[i]);
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    write_line(table.header);
    for (const auto& r : table.rows) write_line(r);
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    CsvTable    t;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv file: " + path.string());
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        t.add_row(split(line));
    }
    return t;
}

}  // namespace resetlab
