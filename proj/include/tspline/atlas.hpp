#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "tspline/grid.hpp"

namespace tsp {

// Placements of the host squares that meet an open box around a grid point.
// The point goes to (0,0); coordinates are host units. The atlas is flat when
// every lattice cell meeting the box is covered by exactly one host and no
// host needs two placements: inside the box the mesh is then a plain square
// grid.
class HostAtlas {
 public:
  // `root_rot` turns the origin's host before placing it.
  HostAtlas(const InitialTopology& topo, const GridPoint& origin, int64_t xlo, int64_t xhi,
            int64_t ylo, int64_t yhi, int root_rot = 0);

  bool flat() const { return flat_; }
  const std::string& problem() const { return problem_; }
  const std::map<int, Placement>& placements() const { return placed_; }
  const std::array<int64_t, 4>& box() const { return box_; }

  // Chart position of a point, using any spelling that lands in a placed
  // host (flat atlases agree on all of them).
  std::optional<std::array<int64_t, 2>> to_chart(const GridPoint& p) const;
  // Part of the box inside `host`, in host coordinates (closed), or nullopt.
  std::optional<std::array<int64_t, 4>> host_window(int host) const;

 private:
  const InitialTopology* topo_;
  std::array<int64_t, 4> box_;  // xlo, xhi, ylo, yhi
  std::map<int, Placement> placed_;
  bool flat_ = true;
  std::string problem_;
};

}  // namespace tsp
