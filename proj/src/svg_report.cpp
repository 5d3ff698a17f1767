#include "lsp/svg_report.hpp"

#include "lsp/io_util.hpp"
#include "lsp/types.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace lsp {

namespace {

constexpr int kWidth = 760;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70, kMarginRight = 160, kMarginTop = 50, kMarginBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#17becf", "#7f7f7f"};

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Round tick spacing to a 1/2/5 decade multiple.
double nice_step(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  if (norm < 1.5) return mag;
  if (norm < 3.5) return 2.0 * mag;
  if (norm < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<ChartSeries>& series) {
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
  for (const ChartSeries& s : series) {
    for (const SeriesPoint& pt : s.points) {
      x_min = std::min(x_min, pt.x);
      x_max = std::max(x_max, pt.x);
      y_min = std::min(y_min, pt.mean - pt.se);
      y_max = std::max(y_max, pt.mean + pt.se);
    }
  }
  if (!(x_min <= x_max)) throw Error(ErrorCode::EmptyData, "no points to plot");
  if (x_min == x_max) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  const double y_pad = (y_max - y_min) * 0.08 + 1e-12;
  y_min -= y_pad;
  y_max += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"17\">"
      << escape_xml(title) << "</text>\n";

  // axes
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
      << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
      << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";

  const double x_step = nice_step(x_max - x_min);
  for (double t = std::ceil(x_min / x_step) * x_step; t <= x_max + 1e-12; t += x_step) {
    svg << "<line x1=\"" << coord(sx(t)) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << coord(sx(t)) << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << coord(sx(t)) << "\" y=\"" << kMarginTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << format_double(t)
        << "</text>\n";
  }
  const double y_step = nice_step(y_max - y_min);
  for (double t = std::ceil(y_min / y_step) * y_step; t <= y_max + 1e-12; t += y_step) {
    svg << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << coord(sy(t)) << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << coord(sy(t)) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << coord(sy(t)) << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << coord(sy(t))
        << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    svg << "<text x=\"" << kMarginLeft - 9 << "\" y=\"" << coord(sy(t) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << format_double(t)
        << "</text>\n";
  }

  svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << escape_xml(x_label)
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 "
         "18 "
      << kMarginTop + plot_h / 2 << ")\">" << escape_xml(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const ChartSeries& s = series[i];
    for (const SeriesPoint& pt : s.points) {
      if (pt.se <= 0.0) continue;
      svg << "<line x1=\"" << coord(sx(pt.x)) << "\" y1=\"" << coord(sy(pt.mean - pt.se)) << "\" x2=\""
          << coord(sx(pt.x)) << "\" y2=\"" << coord(sy(pt.mean + pt.se)) << "\" stroke=\"" << color
          << "\" stroke-width=\"1\" opacity=\"0.6\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (const SeriesPoint& pt : s.points) svg << coord(sx(pt.x)) << ',' << coord(sy(pt.mean)) << ' ';
    svg << "\"/>\n";
    for (const SeriesPoint& pt : s.points) {
      svg << "<circle cx=\"" << coord(sx(pt.x)) << "\" cy=\"" << coord(sy(pt.mean))
          << "\" r=\"2.4\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kMarginTop + 16.0 * static_cast<double>(i);
    svg << "<line x1=\"" << kMarginLeft + plot_w + 12 << "\" y1=\"" << coord(ly) << "\" x2=\""
        << kMarginLeft + plot_w + 34 << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2.5\"/>\n";
    svg << "<text x=\"" << kMarginLeft + plot_w + 40 << "\" y=\"" << coord(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(s.name) << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<ChartSeries>& series) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << render_line_chart_svg(title, x_label, y_label, series);
}

}  // namespace lsp
