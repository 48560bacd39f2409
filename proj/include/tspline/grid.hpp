#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tsp {

// Host coordinates: every initial element is the square [0, kScale]^2.
// kDepth leaves room for the level cap (30) plus midpoints and a few
// extra bisections from Bezier extraction.
inline constexpr int kDepth = 40;
inline constexpr int64_t kScale = int64_t(1) << kDepth;

struct GridPoint {
  int32_t host = -1;
  int64_t x = 0;
  int64_t y = 0;

  bool operator==(const GridPoint& o) const { return host == o.host && x == o.x && y == o.y; }
  bool operator!=(const GridPoint& o) const { return !(*this == o); }
  bool operator<(const GridPoint& o) const {
    if (host != o.host) return host < o.host;
    if (x != o.x) return x < o.x;
    return y < o.y;
  }
};

struct GridPointHash {
  size_t operator()(const GridPoint& p) const {
    uint64_t h = uint64_t(p.host) * 0x9E3779B97F4A7C15ULL;
    h ^= uint64_t(p.x) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h ^= uint64_t(p.y) + 0x85157AF5ULL + (h << 6) + (h >> 2);
    return size_t(h);
  }
};

// Smallest level L such that both coordinates are multiples of kScale >> L.
int point_level(int64_t x, int64_t y);
inline int point_level(const GridPoint& p) { return point_level(p.x, p.y); }

// Local geometry of a host square. Corner k: (0,0),(S,0),(S,S),(0,S).
// Side s runs from corner s to corner s+1 (counterclockwise).
std::array<int64_t, 2> corner_xy(int k);
std::array<int64_t, 2> side_point(int side, int64_t u);
int64_t side_param(int side, int64_t x, int64_t y);
bool on_side(int side, int64_t x, int64_t y);
int corner_index(int64_t x, int64_t y);  // -1 if not a corner

// Rigid motion of host coordinates into a plane: rotate by rot*90deg, then
// translate. All values in host units.
struct Placement {
  int rot = 0;
  int64_t tx = 0;
  int64_t ty = 0;

  std::array<int64_t, 2> apply(int64_t x, int64_t y) const;
  std::array<double, 2> apply(double x, double y) const;
  std::array<int64_t, 2> rotate(int64_t x, int64_t y) const;
  // inverse of apply
  std::array<int64_t, 2> unapply(int64_t x, int64_t y) const;
  std::array<double, 2> unapply(double x, double y) const;
  bool operator==(const Placement& o) const { return rot == o.rot && tx == o.tx && ty == o.ty; }
  bool operator!=(const Placement& o) const { return !(*this == o); }
};

// Gluing data of the initial (level 0) mesh.
class InitialTopology {
 public:
  struct SideLink {
    int host = -1;
    int side = -1;
  };

  void build(const std::vector<std::array<int, 4>>& corners, int num_nodes);

  int num_hosts() const { return int(corners_.size()); }
  int num_nodes() const { return int(node_hosts_.size()); }
  int corner_node(int host, int k) const { return corners_[host][k]; }
  const std::array<int, 4>& corners(int host) const { return corners_[host]; }
  SideLink neighbor(int host, int side) const { return links_[host][side]; }
  const std::vector<std::pair<int, int>>& node_hosts(int node) const { return node_hosts_[node]; }

  // All (host, x, y) spellings of the same point.
  void representations(const GridPoint& p, std::vector<GridPoint>& out) const;
  GridPoint canonical(const GridPoint& p) const;
  std::optional<GridPoint> in_host(const GridPoint& p, int host) const;

  // Placement of the neighbor host across `side` given the placement of `host`.
  Placement glue(const Placement& from, int host, int side) const;

 private:
  std::vector<std::array<int, 4>> corners_;
  std::vector<std::array<SideLink, 4>> links_;
  std::vector<std::vector<std::pair<int, int>>> node_hosts_;
};

// Breadth-first search on the level-L virtual uniform refinement, counting
// vertex-connected cells. Points must lie on the level-L grid.
class MetricBfs {
 public:
  MetricBfs(const InitialTopology& topo, const GridPoint& source, int level, int64_t radius);

  // Stop as soon as all targets are reached (or radius is exhausted).
  MetricBfs(const InitialTopology& topo, const GridPoint& source, int level, int64_t radius,
            const std::vector<GridPoint>& targets);

  // Multi-source variant.
  MetricBfs(const InitialTopology& topo, const std::vector<GridPoint>& sources, int level,
            int64_t radius);

  int level() const { return level_; }
  int64_t radius() const { return radius_; }
  std::optional<int64_t> steps(const GridPoint& canonical_point) const;
  const std::unordered_map<GridPoint, int64_t, GridPointHash>& visited() const { return dist_; }

  void neighbors(const GridPoint& p, std::vector<GridPoint>& out) const;

 private:
  void run(const std::vector<GridPoint>& sources, const std::vector<GridPoint>* targets);

  const InitialTopology& topo_;
  int level_;
  int64_t radius_;
  std::unordered_map<GridPoint, int64_t, GridPointHash> dist_;
};

// dist(a,b) in level-0 units, or nullopt if it exceeds `radius` (level-0 units).
std::optional<double> mesh_dist(const InitialTopology& topo, const GridPoint& a, const GridPoint& b,
                                double radius);

}  // namespace tsp
