#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace resetlab {

// Shortest round-trippable text for a double (std::to_chars, at most 17
// significant digits).
[[nodiscard]] std::string format_double(double v);
// Throws ConfigError when the text is not a complete number.
[[nodiscard]] double parse_double(const std::string& text);

// Header row plus rows of cells, comma separated, LF line endings. Cells may
// not contain commas, quotes or newlines.
struct CsvTable {
    std::vector<std::string>              header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    [[nodiscard]] std::size_t column(const std::string& name) const;  // throws when missing
    [[nodiscard]] double      number(std::size_t row, const std::string& name) const;
};

// IoError on failure to open or write.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

}  // namespace resetlab
