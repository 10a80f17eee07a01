#pragma once

// Minimal deterministic SVG line plots: fixed 800×600 canvas, polylines, axis ticks
// and optional circle markers. Output depends only on the input data.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hft/csv.hpp"

namespace hft {

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f4e9a";
};

struct PlotMarker {
  double x;
  double y;
  std::string color = "#d62728";
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<PlotMarker> markers;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Tick spacing from {1, 2, 5}·10^k giving roughly `target` intervals.
inline double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0})
    if (f * mag >= raw) return f * mag;
  return 10.0 * mag;
}

}  // namespace detail

inline std::string render_svg(const PlotSpec& spec) {
  constexpr double width = 800, height = 600;
  constexpr double left = 90, right = 30, top = 50, bottom = 70;
  constexpr double pw = width - left - right, ph = height - top - bottom;

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : spec.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  for (const auto& m : spec.markers) {
    xmin = std::min(xmin, m.x);
    xmax = std::max(xmax, m.x);
    ymin = std::min(ymin, m.y);
    ymax = std::max(ymax, m.y);
  }
  if (!(xmin <= xmax)) xmin = 0, xmax = 1;
  if (!(ymin <= ymax)) ymin = 0, ymax = 1;
  if (xmax - xmin < 1e-12) xmin -= 0.5, xmax += 0.5;
  if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };
  auto f2 = [](double v) { return format_fixed(v, 2); };
  auto label = [](double v, double step) {
    const int decimals = std::max(0, static_cast<int>(-std::floor(std::log10(step))));
    double r = std::round(v / step) * step;
    if (std::abs(r) < 0.5 * step) r = 0.0;
    return format_fixed(r, decimals);
  };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  o += "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" +
       detail::xml_escape(spec.title) + "</text>\n";
  o += "<rect x=\"" + f2(left) + "\" y=\"" + f2(top) + "\" width=\"" + f2(pw) + "\" height=\"" + f2(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xs = detail::nice_step(xmax - xmin, 8);
  for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-9 * xs; t += xs) {
    o += "<line x1=\"" + f2(px(t)) + "\" y1=\"" + f2(top + ph) + "\" x2=\"" + f2(px(t)) + "\" y2=\"" +
         f2(top + ph + 6) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + f2(px(t)) + "\" y=\"" + f2(top + ph + 22) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + label(t, xs) + "</text>\n";
  }
  const double ys = detail::nice_step(ymax - ymin, 8);
  for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-9 * ys; t += ys) {
    o += "<line x1=\"" + f2(left - 6) + "\" y1=\"" + f2(py(t)) + "\" x2=\"" + f2(left) + "\" y2=\"" +
         f2(py(t)) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + f2(left - 10) + "\" y=\"" + f2(py(t) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + label(t, ys) + "</text>\n";
  }
  o += "<text x=\"400\" y=\"585\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
       detail::xml_escape(spec.x_label) + "</text>\n";
  o += "<text x=\"20\" y=\"300\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
       "transform=\"rotate(-90 20 300)\">" +
       detail::xml_escape(spec.y_label) + "</text>\n";

  for (const auto& s : spec.series) {
    // a repeated abscissa starts a new segment (jump in a multivalued curve)
    std::size_t i = 0;
    while (i < s.x.size()) {
      std::string pts;
      std::size_t j = i;
      for (; j < s.x.size(); ++j) {
        if (j > i && s.x[j] == s.x[j - 1]) break;
        if (j > i) pts += ' ';
        pts += f2(px(s.x[j])) + ',' + f2(py(s.y[j]));
      }
      o += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
      i = j;
    }
  }
  for (const auto& m : spec.markers)
    o += "<circle cx=\"" + f2(px(m.x)) + "\" cy=\"" + f2(py(m.y)) + "\" r=\"6\" fill=\"none\" stroke=\"" +
         m.color + "\" stroke-width=\"2\"/>\n";
  o += "</svg>\n";
  return o;
}

}  // namespace hft
