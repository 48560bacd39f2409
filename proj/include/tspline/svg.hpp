#pragma once

#include <string>

#include "tspline/mesh.hpp"

namespace tsp {

enum class SvgColoring { Plain, Levels, Directions, Extensions };

// SVG 1.1 drawing with one polyline per active edge. Extensions are drawn as
// extra paths over the mesh. Needs node positions.
std::string render_svg(const TMesh& mesh, SvgColoring coloring);

}  // namespace tsp
