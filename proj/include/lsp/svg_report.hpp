#pragma once
// Minimal SVG line charts (mean +/- standard error vs x) for sweep summaries.
// Output contains no timestamps, so identical inputs give identical bytes.

#include <string>
#include <vector>

namespace lsp {

struct SeriesPoint {
  double x = 0.0;
  double mean = 0.0;
  double se = 0.0;
};

struct ChartSeries {
  std::string name;
  std::vector<SeriesPoint> points;
};

std::string render_line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<ChartSeries>& series);

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<ChartSeries>& series);

}  // namespace lsp
