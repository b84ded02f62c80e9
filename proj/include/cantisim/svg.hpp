#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "cantisim/csv.hpp"
#include "cantisim/errors.hpp"

namespace cantisim {

struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

struct SvgMarker {
  double x = 0.0;
  std::string text;
};

struct SvgPlot {
  std::string title, xlabel, ylabel;
  std::vector<SvgSeries> series;
  std::vector<SvgMarker> markers;  // vertical guides, e.g. peak frequencies
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline double nice_step(double range, int target) {
  const double raw = range / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step = 10.0;
  if (frac <= 1.0) step = 1.0;
  else if (frac <= 2.0) step = 2.0;
  else if (frac <= 5.0) step = 5.0;
  return step * mag;
}

}  // namespace detail

// Deterministic standalone line plot. Series beyond ~4000 points are strided
// down for rendering only; data files keep full resolution.
inline void write_svg_plot(const std::string& path, const SvgPlot& plot) {
  const int W = 960, H = 540, ml = 72, mr = 24, mt = 42, mb = 54;
  const double pw = W - ml - mr, ph = H - mt - mb;

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : plot.series) {
    for (double v : s.x) {
      x0 = std::min(x0, v);
      x1 = std::max(x1, v);
    }
    for (double v : s.y) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (x0 > x1) {
    x0 = 0.0;
    x1 = 1.0;
  }
  if (y0 > y1) {
    y0 = 0.0;
    y1 = 1.0;
  }
  if (x1 - x0 < 1e-300) {
    x0 -= 1.0;
    x1 += 1.0;
  }
  const double ypad = (y1 - y0) * 0.06;
  y0 -= ypad > 0.0 ? ypad : 1.0;
  y1 += ypad > 0.0 ? ypad : 1.0;

  const auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  const auto py = [&](double y) { return mt + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << ' ' << H
      << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << plot.title << "</text>\n";

  // grid and tick labels
  const double xs = detail::nice_step(x1 - x0, 7), ys = detail::nice_step(y1 - y0, 6);
  out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-12 * xs; t += xs)
    out << "<line x1=\"" << detail::svg_num(px(t)) << "\" y1=\"" << mt << "\" x2=\""
        << detail::svg_num(px(t)) << "\" y2=\"" << mt + ph << "\"/>\n";
  for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-12 * ys; t += ys)
    out << "<line x1=\"" << ml << "\" y1=\"" << detail::svg_num(py(t)) << "\" x2=\""
        << ml + pw << "\" y2=\"" << detail::svg_num(py(t)) << "\"/>\n";
  out << "</g>\n<g fill=\"#444444\">\n";
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-12 * xs; t += xs)
    out << "<text x=\"" << detail::svg_num(px(t)) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\">" << detail::svg_num(t) << "</text>\n";
  for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-12 * ys; t += ys)
    out << "<text x=\"" << ml - 8 << "\" y=\"" << detail::svg_num(py(t) + 4)
        << "\" text-anchor=\"end\">" << detail::svg_num(t) << "</text>\n";
  out << "</g>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << detail::svg_num(pw)
      << "\" height=\"" << detail::svg_num(ph)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 14
      << "\" text-anchor=\"middle\">" << plot.xlabel << "</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">"
      << plot.ylabel << "</text>\n";

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  for (size_t si = 0; si < plot.series.size(); ++si) {
    const auto& s = plot.series[si];
    const size_t n = s.x.size();
    if (n == 0 || s.y.size() != n) continue;
    const size_t stride = std::max<size_t>(1, n / 4000);
    out << "<polyline fill=\"none\" stroke=\"" << palette[si % 6]
        << "\" stroke-width=\"1.4\" points=\"";
    for (size_t k = 0; k < n; k += stride)
      out << detail::svg_num(px(s.x[k])) << ',' << detail::svg_num(py(s.y[k])) << ' ';
    if ((n - 1) % stride != 0)
      out << detail::svg_num(px(s.x[n - 1])) << ',' << detail::svg_num(py(s.y[n - 1]));
    out << "\"/>\n";
    out << "<text x=\"" << ml + pw - 10 << "\" y=\"" << mt + 18 + 17 * double(si)
        << "\" text-anchor=\"end\" fill=\"" << palette[si % 6] << "\">" << s.label
        << "</text>\n";
  }

  for (const auto& m : plot.markers) {
    if (m.x < x0 || m.x > x1) continue;
    out << "<line x1=\"" << detail::svg_num(px(m.x)) << "\" y1=\"" << mt << "\" x2=\""
        << detail::svg_num(px(m.x)) << "\" y2=\"" << mt + ph
        << "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << detail::svg_num(px(m.x) + 4) << "\" y=\"" << mt + 14
        << "\" fill=\"#555555\" font-size=\"12\">" << m.text << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace cantisim
