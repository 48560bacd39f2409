#pragma once

#include <map>
#include <vector>

#include "tspline/mesh.hpp"

namespace tsp {

struct BezierStats {
  int iterations = 0;
  std::vector<int> subdivided;  // edge ids of the input numbering and beyond
  // elements seen with #nodes != #edges or outside {4,5} during the loop
  int malformed_elements = 0;
  // subdivisions whose element touched no T- or I-node at that moment
  int subdivisions_off_tnodes = 0;
};

// Extension of every T- and I-node by ceil(p/2) elements. The result links
// back to its control mesh, so calling this on a Bezier mesh recomputes from
// the same control mesh and returns the same partition.
TMesh bezier_mesh(const TMesh& mesh, BezierStats* stats = nullptr);

// Continuity order per active edge: 0 on the (p-1)-prolongation of the
// spokes of every extraordinary node, p-1 elsewhere.
std::map<int, int> continuity_map(const TMesh& bezier, const std::vector<int>& evs);

}  // namespace tsp
