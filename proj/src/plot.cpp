#include "resetlab/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "resetlab/errors.hpp"

namespace resetlab {

namespace {

constexpr double kWidth  = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft   = 70.0;
constexpr double kRight  = 160.0;
constexpr double kTop    = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

std::string num(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    auto tx = [&](double x) { return spec.log_x ? std::log10(x) : x; };
    auto ok = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0.0); };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!ok(s.x[i], s.y[i])) continue;
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymin -= 1.0, ymax += 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (tx(x) - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
        << "</text>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    if (spec.log_x) {
        for (int d = static_cast<int>(std::ceil(xmin)); d <= static_cast<int>(std::floor(xmax)); ++d) {
            const double x = kLeft + (d - xmin) / (xmax - xmin) * pw;
            out << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kTop + ph
                << "\" stroke=\"#ddd\"/>\n";
            out << "<text x=\"" << x << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << num(std::pow(10.0, d))
                << "</text>\n";
        }
    } else {
        for (int i = 0; i <= 5; ++i) {
            const double v = xmin + (xmax - xmin) * i / 5.0;
            const double x = kLeft + pw * i / 5.0;
            out << "<text x=\"" << x << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
        }
    }
    for (int i = 0; i <= 5; ++i) {
        const double v = ymin + (ymax - ymin) * i / 5.0;
        const double y = py(v);
        out << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
            << "\" stroke=\"#eee\"/>\n";
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
        << escape(spec.x_label) << "</text>\n";
    out << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(spec.y_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto&        s = series[si];
        const char*        color = kColors[si % kColors.size()];
        std::ostringstream pts;
        pts.precision(7);
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (ok(s.x[i], s.y[i])) pts << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
            << "\"/>\n";
        const double ly = kTop + 16 + 18.0 * static_cast<double>(si);
        out << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + pw + 32 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kLeft + pw + 38 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace resetlab
