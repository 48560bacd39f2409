#include "tspline/atlas.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <vector>

namespace tsp {

namespace {

int64_t floor_div(int64_t a, int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

std::array<int64_t, 4> placed_square(const Placement& P) {
  auto a = P.apply(int64_t(0), int64_t(0)), b = P.apply(kScale, kScale);
  return {std::min(a[0], b[0]), std::max(a[0], b[0]), std::min(a[1], b[1]), std::max(a[1], b[1])};
}

bool meets(const std::array<int64_t, 4>& sq, const std::array<int64_t, 4>& box) {
  return sq[0] < box[1] && sq[1] > box[0] && sq[2] < box[3] && sq[3] > box[2];
}

}  // namespace

HostAtlas::HostAtlas(const InitialTopology& topo, const GridPoint& origin, int64_t xlo, int64_t xhi,
                     int64_t ylo, int64_t yhi, int root_rot)
    : topo_(&topo), box_{xlo, xhi, ylo, yhi} {
  Placement root{root_rot & 3, 0, 0};
  auto o = root.rotate(origin.x, origin.y);
  root.tx = -o[0];
  root.ty = -o[1];
  placed_[origin.host] = root;
  std::deque<int> queue{origin.host};
  std::map<std::pair<int64_t, int64_t>, int> cells;
  auto note_fail = [&](const std::string& why) {
    if (flat_) problem_ = why;
    flat_ = false;
  };
  while (!queue.empty()) {
    int h = queue.front();
    queue.pop_front();
    Placement P = placed_[h];
    auto sq = placed_square(P);
    auto [it, fresh] = cells.emplace(std::make_pair(sq[0], sq[2]), h);
    if (!fresh && it->second != h)
      note_fail("hosts " + std::to_string(h) + " and " + std::to_string(it->second) + " overlap");
    for (int s = 0; s < 4; ++s) {
      auto link = topo.neighbor(h, s);
      if (link.host < 0) continue;
      Placement Q = topo.glue(P, h, s);
      if (!meets(placed_square(Q), box_)) continue;
      auto f = placed_.find(link.host);
      if (f == placed_.end()) {
        placed_[link.host] = Q;
        queue.push_back(link.host);
      } else if (f->second != Q) {
        note_fail("host " + std::to_string(link.host) + " needs two placements");
      }
    }
  }
  // Cells meeting the box must form a rectangle (the domain boundary may cut
  // the box, but only along a straight line) ...
  int64_t ox = ((root.tx % kScale) + kScale) % kScale;  // lattice offset
  int64_t oy = ((root.ty % kScale) + kScale) % kScale;
  auto cell_i = [&](int64_t x) { return floor_div(x - ox, kScale); };
  auto cell_j = [&](int64_t y) { return floor_div(y - oy, kScale); };
  int64_t i0 = INT64_MAX, i1 = INT64_MIN, j0 = INT64_MAX, j1 = INT64_MIN, have = 0;
  for (auto& [c, h] : cells) {
    if (!meets({c.first, c.first + kScale, c.second, c.second + kScale}, box_)) continue;
    ++have;
    i0 = std::min(i0, cell_i(c.first));
    i1 = std::max(i1, cell_i(c.first));
    j0 = std::min(j0, cell_j(c.second));
    j1 = std::max(j1, cell_j(c.second));
  }
  if (have != (i1 - i0 + 1) * (j1 - j0 + 1))
    note_fail("covered cells are not a rectangle (" + std::to_string(have) + " cells)");
  // ... and hosts side by side in the chart must be glued to each other.
  for (auto& [h, P] : placed_) {
    auto sq = placed_square(P);
    if (!meets(sq, box_)) continue;
    for (int s = 0; s < 4; ++s) {
      auto a = corner_xy(s), b = corner_xy((s + 1) & 3);
      auto pa = P.apply(a[0], a[1]), pb = P.apply(b[0], b[1]);
      // the cell across side s: shift the square by the outward normal
      int64_t dx = 0, dy = 0;
      if (pa[0] == pb[0]) dx = pa[0] == sq[0] ? -kScale : kScale;
      else dy = pa[1] == sq[2] ? -kScale : kScale;
      auto f = cells.find({sq[0] + dx, sq[2] + dy});
      if (f == cells.end()) continue;
      auto link = topo.neighbor(h, s);
      if (link.host != f->second || topo.glue(P, h, s) != placed_[f->second])
        note_fail("hosts " + std::to_string(h) + " and " + std::to_string(f->second) +
                  " touch in the chart without sharing a side");
    }
  }
}

std::optional<std::array<int64_t, 2>> HostAtlas::to_chart(const GridPoint& p) const {
  std::vector<GridPoint> reps;
  topo_->representations(p, reps);
  for (auto& r : reps) {
    auto f = placed_.find(r.host);
    if (f != placed_.end()) return f->second.apply(r.x, r.y);
  }
  return std::nullopt;
}

std::optional<std::array<int64_t, 4>> HostAtlas::host_window(int host) const {
  auto f = placed_.find(host);
  if (f == placed_.end()) return std::nullopt;
  auto sq = placed_square(f->second);
  int64_t x0 = std::max(sq[0], box_[0]), x1 = std::min(sq[1], box_[1]);
  int64_t y0 = std::max(sq[2], box_[2]), y1 = std::min(sq[3], box_[3]);
  if (x0 >= x1 || y0 >= y1) return std::nullopt;
  auto a = f->second.unapply(x0, y0), b = f->second.unapply(x1, y1);
  return std::array<int64_t, 4>{std::min(a[0], b[0]), std::max(a[0], b[0]), std::min(a[1], b[1]),
                                std::max(a[1], b[1])};
}

}  // namespace tsp
