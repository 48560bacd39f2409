#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <unordered_set>

#include "tspline/atlas.hpp"
#include "tspline/mesh.hpp"

namespace tsp {

namespace {

int64_t floor_to(int64_t v, int64_t step) { return (v / step) * step; }

int64_t boundary_gap(const GridPoint& a) {
  return std::min(std::min(a.x, a.y), std::min(kScale - a.x, kScale - a.y));
}

// Exact mesh distance in host units when both points sit in a's host and
// the sup-norm distance is below a's distance to the host boundary: any path
// leaving the host is at least that long.
std::optional<int64_t> in_host_distance(const InitialTopology& topo, const GridPoint& a,
                                        const GridPoint& b) {
  auto r = topo.in_host(b, a.host);
  if (!r) return std::nullopt;
  int64_t d = std::max(std::abs(r->x - a.x), std::abs(r->y - a.y));
  if (d >= boundary_gap(a)) return std::nullopt;
  return d;
}

}  // namespace

std::vector<int> edges_within(const TMesh& mesh, const GridPoint& center, int level,
                              int64_t half_width, bool chart_shortcut) {
  const auto& topo = mesh.topo();
  GridPoint a = topo.canonical(center);
  int L0 = std::max(point_level(a), level);
  int64_t R0 = half_width << (L0 - level);
  // flat surroundings: the metric is the sup norm of the chart
  const int64_t R = half_width * (kScale >> level);
  HostAtlas atlas(topo, a, -R - 1, R + 1, -R - 1, R + 1);
  if (chart_shortcut && atlas.flat()) {
    std::vector<int> elems, out;
    for (auto& [h, P] : atlas.placements()) {
      auto w = atlas.host_window(h);
      if (w) mesh.elements_in_box(h, (*w)[0], (*w)[2], (*w)[1], (*w)[3], elems);
    }
    for (int q : elems)
      for (auto& side : mesh.element(q).sides)
        for (int e : side) {
          auto c = atlas.to_chart(mesh.edge(e).mid);
          if (c && std::max(std::abs((*c)[0]), std::abs((*c)[1])) <= R) out.push_back(e);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  MetricBfs coarse(topo, a, L0, R0 + 1);
  const int64_t step = kScale >> L0;

  // candidates: edges of active elements touching any level-L0 cell whose
  // corners are within R0+1 steps
  std::unordered_set<int> elem_set;
  std::vector<int> found;
  std::vector<GridPoint> reps;
  for (auto& [p, d] : coarse.visited()) {
    topo.representations(p, reps);
    for (auto& r : reps) {
      found.clear();
      mesh.elements_in_box(r.host, std::max<int64_t>(0, r.x - step), std::max<int64_t>(0, r.y - step),
                           std::min(kScale, r.x + step), std::min(kScale, r.y + step), found);
      elem_set.insert(found.begin(), found.end());
    }
  }
  std::unordered_set<int> cand;
  for (int q : elem_set)
    for (auto& side : mesh.element(q).sides) cand.insert(side.begin(), side.end());

  std::vector<std::unique_ptr<MetricBfs>> fine(kDepth + 1);
  std::vector<int> out;
  for (int e : cand) {
    const GridPoint& b = mesh.edge(e).mid;
    int Lb = point_level(b);
    if (Lb <= L0) {
      auto st = coarse.steps(b);
      if (st && *st <= R0) out.push_back(e);
      continue;
    }
    // bracket with the corners of the level-L0 cell holding b
    int64_t cx = floor_to(b.x, step), cy = floor_to(b.y, step);
    int64_t lo = 0, hi = INT64_MAX;
    for (int64_t x : {cx, std::min(kScale, cx + step)})
      for (int64_t y : {cy, std::min(kScale, cy + step)}) {
        auto st = coarse.steps(topo.canonical({b.host, x, y}));
        int64_t s = st ? *st : R0 + 2;
        lo = std::max(lo, s);
        hi = std::min(hi, s);
      }
    if (lo - 1 > R0) continue;
    if (hi + 1 <= R0) {
      out.push_back(e);
      continue;
    }
    int64_t Rb = R0 << (Lb - L0);
    if (!fine[Lb]) fine[Lb] = std::make_unique<MetricBfs>(topo, a, Lb, Rb);
    auto st = fine[Lb]->steps(b);
    if (st && *st <= Rb) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> edge_neighborhood(const TMesh& mesh, int e) {
  const auto& E = mesh.edge(e);
  return edges_within(mesh, E.mid, E.level, (mesh.degree() + 1) / 2);
}

}  // namespace tsp

namespace tsp {

std::vector<DistBounds> distances_from(const TMesh& mesh, const GridPoint& source,
                                       const std::vector<GridPoint>& targets,
                                       const std::vector<double>& cutoffs) {
  const auto& topo = mesh.topo();
  const double inf = std::numeric_limits<double>::infinity();
  GridPoint a = topo.canonical(source);
  int La = point_level(a);
  std::vector<DistBounds> out(targets.size(), DistBounds{0, inf});
  double reach = 0;
  for (double c : cutoffs) reach = std::max(reach, c);
  int64_t W = reach >= 4 ? 4 * kScale : int64_t(std::ceil(reach * double(kScale))) + 1;
  HostAtlas atlas(topo, a, -W, W, -W, W);
  // exact groups keyed by BFS level
  std::map<int, std::vector<size_t>> exact, snapped;
  for (size_t i = 0; i < targets.size(); ++i) {
    if (atlas.flat()) {
      auto c = atlas.to_chart(targets[i]);
      int64_t d = c ? std::max(std::abs((*c)[0]), std::abs((*c)[1])) : W;
      if (d < W) {
        double v = double(d) / double(kScale);
        out[i] = {v, v < cutoffs[i] ? v : inf};
        continue;
      }
    }
    if (auto d = in_host_distance(topo, a, targets[i])) {
      double v = double(*d) / double(kScale);
      out[i] = {v, v < cutoffs[i] ? v : inf};
      continue;
    }
    int Lb = point_level(targets[i]);
    (Lb >= La ? exact[Lb] : snapped[Lb]).push_back(i);
  }
  auto run_exact = [&](int L, const std::vector<size_t>& idx) {
    double cut = 0;
    std::vector<GridPoint> goal;
    for (size_t i : idx) {
      cut = std::max(cut, cutoffs[i]);
      goal.push_back(topo.canonical(targets[i]));
    }
    int64_t radius = int64_t(std::ceil(cut * std::ldexp(1.0, L)));
    MetricBfs bfs(topo, a, L, radius, goal);
    for (size_t k = 0; k < idx.size(); ++k) {
      auto st = bfs.steps(goal[k]);
      double d = st ? std::ldexp(double(*st), -L) : inf;
      if (d >= cutoffs[idx[k]]) d = inf;
      out[idx[k]] = {st ? std::ldexp(double(*st), -L) : cutoffs[idx[k]], d};
    }
  };
  for (auto& [L, idx] : exact) run_exact(L, idx);
  std::map<int, std::vector<size_t>> retry;
  for (auto& [L, idx] : snapped) {
    int64_t step = kScale >> L;
    GridPoint c = topo.canonical({a.host, (a.x / step) * step, (a.y / step) * step});
    double cell = std::ldexp(1.0, -L);
    double cut = 0;
    std::vector<GridPoint> goal;
    for (size_t i : idx) {
      cut = std::max(cut, cutoffs[i]);
      goal.push_back(topo.canonical(targets[i]));
    }
    int64_t radius = int64_t(std::ceil((cut + cell) * std::ldexp(1.0, L)));
    MetricBfs bfs(topo, c, L, radius, goal);
    for (size_t k = 0; k < idx.size(); ++k) {
      size_t i = idx[k];
      auto st = bfs.steps(goal[k]);
      if (!st) {
        out[i] = {cutoffs[i], inf};
        continue;
      }
      double d = std::ldexp(double(*st), -L);
      double lo = std::max(0.0, d - cell), hi = d + cell;
      if (hi < cutoffs[i])
        out[i] = {lo, hi};
      else if (lo >= cutoffs[i])
        out[i] = {lo, inf};
      else
        retry[La].push_back(i);
    }
  }
  for (auto& [L, idx] : retry) run_exact(L, idx);
  return out;
}

}  // namespace tsp
