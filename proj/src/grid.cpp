#include "tspline/grid.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>

namespace tsp {

int point_level(int64_t x, int64_t y) {
  int lv = 0;
  for (int64_t c : {x, y}) {
    if (c == 0) continue;
    int tz = __builtin_ctzll(uint64_t(c));
    lv = std::max(lv, kDepth - tz);
  }
  return lv;
}

std::array<int64_t, 2> corner_xy(int k) {
  switch (k & 3) {
    case 0: return {0, 0};
    case 1: return {kScale, 0};
    case 2: return {kScale, kScale};
    default: return {0, kScale};
  }
}

std::array<int64_t, 2> side_point(int side, int64_t u) {
  switch (side & 3) {
    case 0: return {u, 0};
    case 1: return {kScale, u};
    case 2: return {kScale - u, kScale};
    default: return {0, kScale - u};
  }
}

int64_t side_param(int side, int64_t x, int64_t y) {
  switch (side & 3) {
    case 0: return x;
    case 1: return y;
    case 2: return kScale - x;
    default: return kScale - y;
  }
}

bool on_side(int side, int64_t x, int64_t y) {
  switch (side & 3) {
    case 0: return y == 0;
    case 1: return x == kScale;
    case 2: return y == kScale;
    default: return x == 0;
  }
}

int corner_index(int64_t x, int64_t y) {
  if (y == 0 && x == 0) return 0;
  if (y == 0 && x == kScale) return 1;
  if (y == kScale && x == kScale) return 2;
  if (y == kScale && x == 0) return 3;
  return -1;
}

std::array<int64_t, 2> Placement::rotate(int64_t x, int64_t y) const {
  switch (rot & 3) {
    case 0: return {x, y};
    case 1: return {-y, x};
    case 2: return {-x, -y};
    default: return {y, -x};
  }
}

std::array<int64_t, 2> Placement::apply(int64_t x, int64_t y) const {
  auto r = rotate(x, y);
  return {r[0] + tx, r[1] + ty};
}

std::array<double, 2> Placement::apply(double x, double y) const {
  double rx, ry;
  switch (rot & 3) {
    case 0: rx = x; ry = y; break;
    case 1: rx = -y; ry = x; break;
    case 2: rx = -x; ry = -y; break;
    default: rx = y; ry = -x; break;
  }
  return {rx + double(tx), ry + double(ty)};
}

std::array<int64_t, 2> Placement::unapply(int64_t x, int64_t y) const {
  Placement inv{(4 - (rot & 3)) & 3, 0, 0};
  return inv.rotate(x - tx, y - ty);
}

std::array<double, 2> Placement::unapply(double x, double y) const {
  Placement inv{(4 - (rot & 3)) & 3, 0, 0};
  return inv.apply(x - double(tx), y - double(ty));
}

void InitialTopology::build(const std::vector<std::array<int, 4>>& corners, int num_nodes) {
  corners_ = corners;
  links_.assign(corners.size(), {});
  node_hosts_.assign(num_nodes, {});
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> by_edge;
  for (int h = 0; h < int(corners.size()); ++h) {
    for (int k = 0; k < 4; ++k) {
      int a = corners[h][k];
      int b = corners[h][(k + 1) & 3];
      if (a < 0 || a >= num_nodes || b < 0 || b >= num_nodes)
        throw std::runtime_error("element " + std::to_string(h) + " references undefined node");
      node_hosts_[a].push_back({h, k});
      by_edge[{std::min(a, b), std::max(a, b)}].push_back({h, k});
    }
  }
  for (auto& [key, uses] : by_edge) {
    if (uses.size() > 2)
      throw std::runtime_error("non-manifold edge " + std::to_string(key.first) + "-" +
                               std::to_string(key.second));
    if (uses.size() == 2) {
      auto [h1, s1] = uses[0];
      auto [h2, s2] = uses[1];
      if (corners[h1][s1] == corners[h2][s2])
        throw std::runtime_error("inconsistent orientation between elements " + std::to_string(h1) +
                                 " and " + std::to_string(h2));
      if (h1 == h2) throw std::runtime_error("element glued to itself: " + std::to_string(h1));
      links_[h1][s1] = {h2, s2};
      links_[h2][s2] = {h1, s1};
    }
  }
}

void InitialTopology::representations(const GridPoint& p, std::vector<GridPoint>& out) const {
  out.clear();
  int k = corner_index(p.x, p.y);
  if (k >= 0) {
    int n = corners_[p.host][k];
    for (auto [h, kk] : node_hosts_[n]) {
      auto c = corner_xy(kk);
      out.push_back({h, c[0], c[1]});
    }
    return;
  }
  out.push_back(p);
  for (int s = 0; s < 4; ++s) {
    if (!on_side(s, p.x, p.y)) continue;
    SideLink l = links_[p.host][s];
    if (l.host >= 0) {
      int64_t u = kScale - side_param(s, p.x, p.y);
      auto q = side_point(l.side, u);
      out.push_back({l.host, q[0], q[1]});
    }
    break;
  }
}

GridPoint InitialTopology::canonical(const GridPoint& p) const {
  bool interior = p.x > 0 && p.x < kScale && p.y > 0 && p.y < kScale;
  if (interior) return p;
  std::vector<GridPoint> reps;
  representations(p, reps);
  return *std::min_element(reps.begin(), reps.end());
}

std::optional<GridPoint> InitialTopology::in_host(const GridPoint& p, int host) const {
  if (p.host == host) return p;
  std::vector<GridPoint> reps;
  representations(p, reps);
  for (auto& r : reps)
    if (r.host == host) return r;
  return std::nullopt;
}

Placement InitialTopology::glue(const Placement& from, int host, int side) const {
  SideLink l = links_[host][side];
  Placement to;
  to.rot = (from.rot + side + 2 - l.side + 8) & 3;
  auto a = corner_xy(side);
  auto pa = from.apply(a[0], a[1]);
  auto b = corner_xy((l.side + 1) & 3);
  auto rb = to.rotate(b[0], b[1]);
  to.tx = pa[0] - rb[0];
  to.ty = pa[1] - rb[1];
  return to;
}

MetricBfs::MetricBfs(const InitialTopology& topo, const GridPoint& source, int level, int64_t radius)
    : topo_(topo), level_(level), radius_(radius) {
  run({topo.canonical(source)}, nullptr);
}

MetricBfs::MetricBfs(const InitialTopology& topo, const GridPoint& source, int level, int64_t radius,
                     const std::vector<GridPoint>& targets)
    : topo_(topo), level_(level), radius_(radius) {
  std::vector<GridPoint> t;
  for (auto& g : targets) t.push_back(topo.canonical(g));
  run({topo.canonical(source)}, &t);
}

MetricBfs::MetricBfs(const InitialTopology& topo, const std::vector<GridPoint>& sources, int level,
                     int64_t radius)
    : topo_(topo), level_(level), radius_(radius) {
  std::vector<GridPoint> s;
  for (auto& g : sources) s.push_back(topo.canonical(g));
  run(s, nullptr);
}

void MetricBfs::neighbors(const GridPoint& p, std::vector<GridPoint>& out) const {
  out.clear();
  const int64_t step = kScale >> level_;
  bool interior = p.x > 0 && p.x < kScale && p.y > 0 && p.y < kScale;
  std::vector<GridPoint> reps;
  if (interior)
    reps.push_back(p);
  else
    topo_.representations(p, reps);
  for (auto& r : reps) {
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        if (!dx && !dy) continue;
        int64_t x = r.x + dx * step, y = r.y + dy * step;
        if (x < 0 || y < 0 || x > kScale || y > kScale) continue;
        out.push_back(topo_.canonical({r.host, x, y}));
      }
  }
}

void MetricBfs::run(const std::vector<GridPoint>& sources, const std::vector<GridPoint>* targets) {
  std::deque<GridPoint> queue;
  size_t remaining = 0;
  std::unordered_map<GridPoint, bool, GridPointHash> want;
  if (targets) {
    for (auto& t : *targets)
      if (want.emplace(t, true).second) ++remaining;
  }
  for (auto& s : sources) {
    if (dist_.emplace(s, 0).second) {
      queue.push_back(s);
      if (targets && want.count(s)) --remaining;
    }
  }
  if (targets && remaining == 0) return;
  std::vector<GridPoint> nb;
  while (!queue.empty()) {
    GridPoint p = queue.front();
    queue.pop_front();
    int64_t d = dist_[p];
    if (d >= radius_) continue;
    neighbors(p, nb);
    for (auto& q : nb) {
      if (dist_.emplace(q, d + 1).second) {
        queue.push_back(q);
        if (targets && want.count(q) && --remaining == 0) return;
      }
    }
  }
}

std::optional<int64_t> MetricBfs::steps(const GridPoint& p) const {
  auto it = dist_.find(p);
  if (it == dist_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> mesh_dist(const InitialTopology& topo, const GridPoint& a, const GridPoint& b,
                                double radius) {
  GridPoint ca = topo.canonical(a), cb = topo.canonical(b);
  if (ca == cb) return 0.0;
  int L = std::max(point_level(ca), point_level(cb));
  int64_t r = int64_t(radius * double(int64_t(1) << L));
  MetricBfs bfs(topo, ca, L, r, {cb});
  auto s = bfs.steps(cb);
  if (!s) return std::nullopt;
  return double(*s) / double(int64_t(1) << L);
}

}  // namespace tsp
