#include "tspline/marks.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

namespace tsp {

namespace {

using Pt = std::array<double, 2>;

double parse_number(const std::string& s, const std::string& spec) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw MarkError("bad number '" + s + "' in mark '" + spec + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t at = 0;
  while (true) {
    size_t k = s.find(sep, at);
    out.push_back(s.substr(at, k == std::string::npos ? std::string::npos : k - at));
    if (k == std::string::npos) break;
    at = k + 1;
  }
  return out;
}

Pt parse_point(const std::string& s, const std::string& spec) {
  auto xy = split(s, ',');
  if (xy.size() != 2) throw MarkError("expected <x>,<y> in mark '" + spec + "'");
  return {parse_number(xy[0], spec), parse_number(xy[1], spec)};
}

std::array<Pt, 2> edge_segment(const TMesh& m, int e) {
  const auto& E = m.edge(e);
  return {m.render_xy(E.host, double(E.x0), double(E.y0)),
          m.render_xy(E.host, double(E.x1), double(E.y1))};
}

double cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool on_segment(const Pt& a, const Pt& b, const Pt& p) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}

// Closed segments, touching counts.
bool segments_meet(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
  double d1 = cross(c, d, a), d2 = cross(c, d, b), d3 = cross(a, b, c), d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  return (d1 == 0 && on_segment(c, d, a)) || (d2 == 0 && on_segment(c, d, b)) ||
         (d3 == 0 && on_segment(a, b, c)) || (d4 == 0 && on_segment(a, b, d));
}

void need_positions(const TMesh& m, const std::string& spec) {
  if (!m.has_positions()) throw MarkError("mark '" + spec + "' needs node positions");
}

}  // namespace

std::vector<int> resolve_mark(const TMesh& mesh, const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw MarkError("mark '" + spec + "' has no kind prefix");
  std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (kind == "edge") {
    int id = -1;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), id);
    if (ec != std::errc() || ptr != arg.data() + arg.size())
      throw MarkError("bad edge id in mark '" + spec + "'");
    if (id < 0 || id >= mesh.num_edges() || !mesh.edge(id).active)
      throw MarkError("mark '" + spec + "' is not an active edge");
    return {id};
  }
  if (kind == "near") {
    need_positions(mesh, spec);
    Pt p = parse_point(arg, spec);
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int e : mesh.active_edges()) {
      auto s = edge_segment(mesh, e);
      double mx = 0.5 * (s[0][0] + s[1][0]) - p[0], my = 0.5 * (s[0][1] + s[1][1]) - p[1];
      double d = mx * mx + my * my;
      if (d < bd) {
        bd = d;
        best = e;
      }
    }
    return {best};
  }
  if (kind == "curve") {
    need_positions(mesh, spec);
    std::vector<Pt> poly;
    for (auto& s : split(arg, ':')) poly.push_back(parse_point(s, spec));
    if (poly.size() < 2) throw MarkError("curve mark '" + spec + "' needs two points or more");
    std::vector<int> out;
    for (int e : mesh.active_edges()) {
      auto s = edge_segment(mesh, e);
      for (size_t i = 0; i + 1 < poly.size(); ++i)
        if (segments_meet(s[0], s[1], poly[i], poly[i + 1])) {
          out.push_back(e);
          break;
        }
    }
    return out;
  }
  throw MarkError("unknown mark kind '" + kind + "'");
}

std::vector<int> resolve_marks(const TMesh& mesh, const std::vector<std::string>& specs) {
  std::vector<int> out;
  std::set<int> seen;
  for (const auto& s : specs)
    for (int e : resolve_mark(mesh, s))
      if (seen.insert(e).second) out.push_back(e);
  return out;
}

}  // namespace tsp
