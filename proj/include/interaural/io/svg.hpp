#pragma once

// SVG heat maps of joint density grids. Shading is log10 of the density,
// clipped to [1e-3, 1]; cells outside the support are left white.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "interaural/grid.hpp"

namespace interaural::io {

struct SvgOptions {
  std::string title;
  double clip_lo = 1e-3;
  double clip_hi = 1.0;
  std::vector<double> axis1_marks;  // dashed horizontal lines at these axis1 values
  std::vector<double> axis2_marks;  // solid vertical lines at these axis2 values
  int width = 640;
  int height = 480;
};

namespace detail {

// Dark blue -> teal -> yellow.
inline std::string shade(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * static_cast<double>(stops.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  char buf[8];
  int c[3];
  for (int k = 0; k < 3; ++k) {
    c[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
  }
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

/// Heat map with axis2 (IPD) horizontal and axis1 (r or p') vertical.
inline void write_heatmap_svg(std::ostream& os, const PdfGrid& g, const SvgOptions& opt = {}) {
  const int ml = 60, mr = 20, mt = 30, mb = 45;
  const double pw = opt.width - ml - mr;
  const double ph = opt.height - mt - mb;
  const auto n1 = g.axis1.size();
  const auto n2 = g.axis2.size();
  const double cw = pw / static_cast<double>(n2);
  const double ch = ph / static_cast<double>(n1);
  const double llo = std::log10(opt.clip_lo);
  const double lhi = std::log10(opt.clip_hi);

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
     << opt.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    os << "<text x=\"" << ml << "\" y=\"20\">" << opt.title << "</text>\n";
  }
  os << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double v = g.at(i, j);
      if (v == kUndefinedDensity) continue;
      const double lv = v > 0.0 ? std::log10(v) : llo;
      const double t = (std::clamp(lv, llo, lhi) - llo) / (lhi - llo);
      const double x = ml + cw * static_cast<double>(j);
      const double y = mt + ph - ch * static_cast<double>(i + 1);
      os << "<rect x=\"" << detail::num(x) << "\" y=\"" << detail::num(y) << "\" width=\""
         << detail::num(cw + 0.05) << "\" height=\"" << detail::num(ch + 0.05) << "\" fill=\""
         << detail::shade(t) << "\"/>\n";
    }
  }
  os << "</g>\n";

  auto xpix = [&](double a2) {
    return ml + pw * (a2 - g.axis2.front()) / (g.axis2.back() - g.axis2.front());
  };
  auto ypix = [&](double a1) {
    return mt + ph - ph * (a1 - g.axis1.front()) / (g.axis1.back() - g.axis1.front());
  };
  for (double m : opt.axis1_marks) {
    if (m < g.axis1.front() || m > g.axis1.back()) continue;
    os << "<line x1=\"" << ml << "\" x2=\"" << detail::num(ml + pw) << "\" y1=\"" << detail::num(ypix(m))
       << "\" y2=\"" << detail::num(ypix(m)) << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
  }
  for (double m : opt.axis2_marks) {
    if (m < g.axis2.front() || m > g.axis2.back()) continue;
    os << "<line x1=\"" << detail::num(xpix(m)) << "\" x2=\"" << detail::num(xpix(m)) << "\" y1=\"" << mt
       << "\" y2=\"" << detail::num(mt + ph) << "\" stroke=\"black\"/>\n";
  }
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << detail::num(pw) << "\" height=\""
     << detail::num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double yb = mt + ph + 16;
  os << "<text x=\"" << ml << "\" y=\"" << detail::num(yb) << "\">" << detail::num(g.axis2.front()) << "</text>\n";
  os << "<text x=\"" << detail::num(ml + pw) << "\" y=\"" << detail::num(yb) << "\" text-anchor=\"end\">"
     << detail::num(g.axis2.back()) << "</text>\n";
  os << "<text x=\"" << detail::num(ml + 0.5 * pw) << "\" y=\"" << detail::num(yb + 16)
     << "\" text-anchor=\"middle\">" << g.axis2_name << "</text>\n";
  os << "<text x=\"" << ml - 6 << "\" y=\"" << detail::num(mt + ph) << "\" text-anchor=\"end\">"
     << detail::num(g.axis1.front()) << "</text>\n";
  os << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10 << "\" text-anchor=\"end\">"
     << detail::num(g.axis1.back()) << "</text>\n";
  os << "<text x=\"" << ml - 6 << "\" y=\"" << detail::num(mt + 0.5 * ph) << "\" text-anchor=\"end\">"
     << g.axis1_name << "</text>\n";
  os << "</svg>\n";
}

}  // namespace interaural::io
