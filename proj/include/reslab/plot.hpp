#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "reslab/report.hpp"
#include "reslab/util.hpp"

namespace reslab {

// One grid point of the comparison plot. NaN marks a value that was not
// computed (for example the oracle under --no-oracle); CSV writes it as
// "nan" and the SVG skips the point.
struct PlotRow {
  std::uint64_t N = 0;
  double empirical_max = std::nan("");
  double bt_bound = std::nan("");
  double hough_bound = std::nan("");
  double thm11 = std::nan("");
  double thm12 = std::nan("");
  double pv = std::nan("");
  double burgess2 = std::nan("");
};

// Geometric N grid: "<start>:<end>:<count>", rounded to integers, deduplicated,
// clamped below q.
inline std::vector<std::uint64_t> geometric_grid(const std::string& spec,
                                                 std::uint64_t q) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos
                                          : spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw validation_error("n-grid: expected <start>:<end>:<count>");
  const std::uint64_t start = detail::parse_u64(spec.substr(0, c1), "n-grid start");
  const std::uint64_t end =
      detail::parse_u64(spec.substr(c1 + 1, c2 - c1 - 1), "n-grid end");
  const std::uint64_t count = detail::parse_u64(spec.substr(c2 + 1), "n-grid count");
  if (start == 0 || end < start || count == 0)
    throw validation_error("n-grid: need 1 <= start <= end and count >= 1");
  std::vector<std::uint64_t> grid;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0
                                : static_cast<double>(i) /
                                      static_cast<double>(count - 1);
    const double v = static_cast<double>(start) *
                     std::pow(static_cast<double>(end) /
                                  static_cast<double>(start),
                              t);
    const std::uint64_t n = static_cast<std::uint64_t>(std::llround(v));
    if (n >= 1 && n < q) grid.push_back(n);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) throw validation_error("n-grid: no usable grid points below q");
  return grid;
}

inline const std::vector<std::string>& plot_columns() {
  static const std::vector<std::string> cols = {
      "N",     "empirical_max", "bt_bound", "hough_bound",
      "thm11", "thm12",         "pv",       "burgess2"};
  return cols;
}

inline std::string render_csv(const std::vector<PlotRow>& rows) {
  std::string out;
  const auto& cols = plot_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out += cols[i];
    out += (i + 1 < cols.size()) ? ',' : '\n';
  }
  for (const auto& r : rows) {
    out += std::to_string(r.N);
    for (double v : {r.empirical_max, r.bt_bound, r.hough_bound, r.thm11,
                     r.thm12, r.pv, r.burgess2}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;  // (N, value), value > 0
};

}  // namespace detail

// Hand-rolled SVG: log10 y axis, x linear or log10, one labeled polyline per
// finite series.
inline std::string render_svg(const std::vector<PlotRow>& rows,
                              const std::string& title, bool x_log = true) {
  const int width = 860, height = 560;
  const double ml = 70, mr = 200, mt = 50, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;

  std::vector<detail::Series> series = {
      {"empirical_max", "#d62728", {}}, {"bt_bound", "#1f77b4", {}},
      {"hough_bound", "#2ca02c", {}},   {"thm11", "#9467bd", {}},
      {"thm12", "#8c564b", {}},         {"pv", "#7f7f7f", {}},
      {"burgess2", "#ff7f0e", {}}};
  auto push = [&](std::size_t s, double n, double v) {
    if (std::isfinite(v) && v > 0.0) series[s].points.emplace_back(n, v);
  };
  for (const auto& r : rows) {
    const double n = static_cast<double>(r.N);
    push(0, n, r.empirical_max);
    push(1, n, r.bt_bound);
    push(2, n, r.hough_bound);
    push(3, n, r.thm11);
    push(4, n, r.thm12);
    push(5, n, r.pv);
    push(6, n, r.burgess2);
  }

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin <= xmax)) throw compute_error("render_svg: nothing to plot");
  if (xmax == xmin) xmax = xmin + 1.0;
  const double ly_min = std::floor(std::log10(ymin));
  const double ly_max = std::ceil(std::log10(ymax) + 1e-12);
  auto tx = [&](double x) {
    const double u = x_log ? (std::log10(x) - std::log10(xmin)) /
                                 (std::log10(xmax) - std::log10(xmin))
                           : (x - xmin) / (xmax - xmin);
    return ml + u * pw;
  };
  auto ty = [&](double y) {
    const double u = (std::log10(y) - ly_min) / (ly_max - ly_min);
    return mt + (1.0 - u) * ph;
  };

  std::string svg;
  auto line = [&](const std::string& s) { svg += s + "\n"; };
  line("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
       std::to_string(width) + "\" height=\"" + std::to_string(height) +
       "\" viewBox=\"0 0 " + std::to_string(width) + " " +
       std::to_string(height) + "\">");
  line("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
  line("<text x=\"" + format_double(ml) + "\" y=\"28\" font-family=\"monospace\" "
       "font-size=\"15\">" + title + "</text>");
  // frame
  line("<rect x=\"" + format_double(ml) + "\" y=\"" + format_double(mt) +
       "\" width=\"" + format_double(pw) + "\" height=\"" + format_double(ph) +
       "\" fill=\"none\" stroke=\"black\"/>");
  // y decade gridlines
  for (double e = ly_min; e <= ly_max + 1e-12; e += 1.0) {
    const double y = ty(std::pow(10.0, e));
    line("<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(y) +
         "\" x2=\"" + format_double(ml + pw) + "\" y2=\"" + format_double(y) +
         "\" stroke=\"#dddddd\"/>");
    line("<text x=\"8\" y=\"" + format_double(y + 4) +
         "\" font-family=\"monospace\" font-size=\"12\">1e" +
         format_double(e) + "</text>");
  }
  // x ticks at the grid points
  for (const auto& r : rows) {
    const double x = tx(static_cast<double>(r.N));
    line("<line x1=\"" + format_double(x) + "\" y1=\"" +
         format_double(mt + ph) + "\" x2=\"" + format_double(x) + "\" y2=\"" +
         format_double(mt + ph + 5) + "\" stroke=\"black\"/>");
    line("<text x=\"" + format_double(x - 10) + "\" y=\"" +
         format_double(mt + ph + 20) +
         "\" font-family=\"monospace\" font-size=\"11\">" +
         std::to_string(r.N) + "</text>");
  }
  line("<text x=\"" + format_double(ml + pw / 2 - 10) + "\" y=\"" +
       format_double(static_cast<double>(height) - 12) +
       "\" font-family=\"monospace\" font-size=\"13\">N</text>");

  double legend_y = mt + 14;
  for (const auto& s : series) {
    if (s.points.empty()) continue;
    std::string pts;
    for (const auto& [x, y] : s.points) {
      pts += format_double(tx(x)) + "," + format_double(ty(y)) + " ";
    }
    line("<polyline fill=\"none\" stroke=\"" + s.color +
         "\" stroke-width=\"1.6\" points=\"" + pts + "\"/>");
    for (const auto& [x, y] : s.points) {
      line("<circle cx=\"" + format_double(tx(x)) + "\" cy=\"" +
           format_double(ty(y)) + "\" r=\"2.3\" fill=\"" + s.color + "\"/>");
    }
    line("<line x1=\"" + format_double(ml + pw + 12) + "\" y1=\"" +
         format_double(legend_y - 4) + "\" x2=\"" + format_double(ml + pw + 34) +
         "\" y2=\"" + format_double(legend_y - 4) + "\" stroke=\"" + s.color +
         "\" stroke-width=\"2\"/>");
    line("<text x=\"" + format_double(ml + pw + 40) + "\" y=\"" +
         format_double(legend_y) +
         "\" font-family=\"monospace\" font-size=\"12\">" + s.label +
         "</text>");
    legend_y += 18;
  }
  line("</svg>");
  return svg;
}

}  // namespace reslab
