#include "tspline/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tspline/bezier.hpp"
#include "tspline/verify.hpp"

namespace tsp {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string render_svg(const TMesh& mesh, SvgColoring coloring) {
  if (!mesh.has_positions()) throw std::invalid_argument("svg needs node positions");
  auto seg = [&](const EdgeRec& E) {
    return std::array<std::array<double, 2>, 2>{
        mesh.render_xy(E.host, double(E.x0), double(E.y0)),
        mesh.render_xy(E.host, double(E.x1), double(E.y1))};
  };
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  auto edges = mesh.active_edges();
  for (int e : edges)
    for (auto& p : seg(mesh.edge(e))) {
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
  double w = std::max(x1 - x0, 1e-9), h = std::max(y1 - y0, 1e-9);
  double pad = 0.02 * std::max(w, h);
  double scale = 800.0 / std::max(w, h);
  // flip y so the drawing matches the usual axis orientation
  auto px = [&](const std::array<double, 2>& p) {
    return fmt((p[0] - x0 + pad) * scale) + "," + fmt((y1 - p[1] + pad) * scale);
  };
  double stroke = 1.0;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << fmt((w + 2 * pad) * scale) << "\" height=\"" << fmt((h + 2 * pad) * scale) << "\">\n"
      << "<g fill=\"none\" stroke-linecap=\"round\">\n";
  for (int e : edges) {
    const auto& E = mesh.edge(e);
    std::string color = "#000000";
    if (coloring == SvgColoring::Levels) color = kPalette[E.level % 10];
    if (coloring == SvgColoring::Directions && !E.di.empty()) color = kPalette[E.di.front() % 10];
    auto s = seg(E);
    out << "<polyline id=\"e" << e << "\" points=\"" << px(s[0]) << " " << px(s[1])
        << "\" stroke=\"" << color << "\" stroke-width=\"" << stroke << "\"/>\n";
  }
  out << "</g>\n";
  if (coloring == SvgColoring::Extensions) {
    TMesh bez = bezier_mesh(mesh);
    out << "<g fill=\"none\" stroke=\"#d62728\" stroke-width=\"" << 2 * stroke
        << "\" stroke-opacity=\"0.7\">\n";
    for (const auto& x : node_extensions(mesh, bez)) {
      out << "<path id=\"ext" << x.node << "\" d=\"";
      for (int e : x.edges) {
        const auto& E = bez.edge(e);
        auto s = std::array<std::array<double, 2>, 2>{
            bez.render_xy(E.host, double(E.x0), double(E.y0)),
            bez.render_xy(E.host, double(E.x1), double(E.y1))};
        out << "M" << px(s[0]) << " L" << px(s[1]) << " ";
      }
      out << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace tsp
