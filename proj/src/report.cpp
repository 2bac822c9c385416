#include "monodrift/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace monodrift {

std::string format_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_)
        throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) text_ += ',';
        text_ += format_full(values[i]);
    }
    text_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

void ensure_directory(const std::string& path) {
    std::filesystem::create_directories(path);
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string render_line_plot_svg(const std::string& title, const std::string& x_label,
                                 const std::string& y_label,
                                 const std::vector<PlotSeries>& series, bool log_y) {
    const int width = 640, height = 420;
    const int ml = 70, mr = 20, mt = 40, mb = 50;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, ty(s.y[i]));
            y_max = std::max(y_max, ty(s.y[i]));
        }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (y_max <= y_min) y_max = y_min + 1.0;
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    auto px = [&](double x) {
        return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr);
    };
    auto py = [&](double y) {
        return height - mb - (ty(y) - y_min) / (y_max - y_min) * (height - mt - mb);
    };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::string svg;
    char buf[256];
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
           "viewBox=\"0 0 640 420\">\n";
    svg += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
                  "font-family=\"sans-serif\">%s</text>\n",
                  title.c_str());
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                  "stroke=\"#333\"/>\n",
                  ml, mt, width - ml - mr, height - mt - mb);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"320\" y=\"405\" text-anchor=\"middle\" font-size=\"12\" "
                  "font-family=\"sans-serif\">%s</text>\n",
                  x_label.c_str());
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"16\" y=\"220\" text-anchor=\"middle\" font-size=\"12\" "
                  "font-family=\"sans-serif\" transform=\"rotate(-90 16 220)\">%s%s</text>\n",
                  y_label.c_str(), log_y ? " (log10)" : "");
    svg += buf;
    // axis extremes
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-size=\"10\" font-family=\"sans-serif\" "
                  "text-anchor=\"middle\">%g</text>\n",
                  ml, height - mb + 16, x_min);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-size=\"10\" font-family=\"sans-serif\" "
                  "text-anchor=\"middle\">%g</text>\n",
                  width - mr, height - mb + 16, x_max);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-size=\"10\" font-family=\"sans-serif\" "
                  "text-anchor=\"end\">%g</text>\n",
                  ml - 6, height - mb, log_y ? std::pow(10.0, y_min) : y_min);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-size=\"10\" font-family=\"sans-serif\" "
                  "text-anchor=\"end\">%g</text>\n",
                  ml - 6, mt + 10, log_y ? std::pow(10.0, y_max) : y_max);
    svg += buf;

    int color_idx = 0;
    for (const auto& s : series) {
        const char* color = colors[color_idx++ % 5];
        std::string points;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
            points += buf;
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%d\" font-size=\"11\" font-family=\"sans-serif\" "
                      "fill=\"%s\">%s</text>\n",
                      width - mr - 150, mt + 16 + 14 * (color_idx - 1), color,
                      s.label.c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace monodrift
