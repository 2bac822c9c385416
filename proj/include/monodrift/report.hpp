// Output emission: CSV at full double precision (17 significant digits,
// header row), JSON with stable key order, optional self-contained SVG
// line plots, and the run manifest (config hash + resolved config).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace monodrift {

std::string format_full(double x);  // %.17g

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }

  private:
    std::string text_;
    std::size_t columns_;
};

void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t value);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal self-contained SVG line plot (log-y optional).
std::string render_line_plot_svg(const std::string& title, const std::string& x_label,
                                 const std::string& y_label,
                                 const std::vector<PlotSeries>& series, bool log_y = false);

}  // namespace monodrift
