#pragma once

// Static SVG drawing of a point set and optional edges. Presentation only.

#include <algorithm>
#include <cstdio>
#include <string>

#include "dilatree/network.hpp"

namespace dilatree {

namespace detail {

inline std::string num6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  std::string s(buf);
  return s == "-0" ? "0" : s;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace detail

/// Fits the points into a size x size viewport (y up), draws edges as lines
/// and points as labelled circles. Output depends only on the inputs.
inline std::string render_svg(const PointSet& ps, const EdgeList& edges = {}, int size = 800) {
  const double margin = 40.0;
  double minx = 0, maxx = 0, miny = 0, maxy = 0;
  std::vector<std::pair<double, double>> xy;
  for (const Point& p : ps.points()) xy.emplace_back(p.x.get_d(), p.y.get_d());
  if (!xy.empty()) {
    minx = maxx = xy[0].first;
    miny = maxy = xy[0].second;
  }
  for (auto [x, y] : xy) {
    minx = std::min(minx, x);
    maxx = std::max(maxx, x);
    miny = std::min(miny, y);
    maxy = std::max(maxy, y);
  }
  double span = std::max({maxx - minx, maxy - miny, 1e-300});
  double s = (size - 2 * margin) / span;
  auto X = [&](double x) { return detail::num6(margin + (x - minx) * s); };
  auto Y = [&](double y) { return detail::num6(size - margin - (y - miny) * s); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(size) + "\" height=\"" +
         std::to_string(size) + "\" viewBox=\"0 0 " + std::to_string(size) + " " + std::to_string(size) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<g stroke=\"black\" stroke-width=\"1\">\n";
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v >= static_cast<Index>(ps.size())) throw InvalidInput("edge index out of range");
    const auto& a = xy[static_cast<std::size_t>(e.u)];
    const auto& b = xy[static_cast<std::size_t>(e.v)];
    out += "<line x1=\"" + X(a.first) + "\" y1=\"" + Y(a.second) + "\" x2=\"" + X(b.first) + "\" y2=\"" +
           Y(b.second) + "\"/>\n";
  }
  out += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < xy.size(); ++i) {
    const auto& p = xy[i];
    out += "<circle cx=\"" + X(p.first) + "\" cy=\"" + Y(p.second) + "\" r=\"3\" fill=\"steelblue\"/>\n";
    out += "<text x=\"" + detail::num6(margin + (p.first - minx) * s + 4) + "\" y=\"" +
           detail::num6(size - margin - (p.second - miny) * s - 4) + "\">" +
           detail::xml_escape(ps.label(static_cast<Index>(i))) + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace dilatree
