#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tspline/mesh.hpp"

namespace tsp {

struct MarkError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Active edges selected by one mark:
//   edge:<id>                      that edge
//   near:<x>,<y>                   edge whose midpoint renders closest to (x, y)
//   curve:<x0>,<y0>:<x1>,<y1>[:..] edges whose rendered segment meets the polyline
// Positions use render coordinates, so near: and curve: need node positions.
std::vector<int> resolve_mark(const TMesh& mesh, const std::string& spec);

// All marks in order, duplicates removed after their first occurrence.
std::vector<int> resolve_marks(const TMesh& mesh, const std::vector<std::string>& specs);

}  // namespace tsp
