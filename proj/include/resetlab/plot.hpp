#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace resetlab {

struct PlotSeries {
    std::string         label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool        log_x = true;
};

// Static SVG line plot. Non-finite points are skipped; with log_x, x <= 0 is
// skipped too. IoError when the file cannot be written.
void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace resetlab
