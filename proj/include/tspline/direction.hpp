#pragma once

#include <string>
#include <vector>

#include "tspline/mesh.hpp"

namespace tsp {

struct DirectionLabeling {
  bool strict = true;
  // per edge id of the initial mesh
  std::vector<std::vector<int>> di;
};

struct LabelingOutcome {
  bool found = false;
  DirectionLabeling labeling;
  // set when the mesh is totally unstructured
  int self_adjacent_class = -1;  // smallest edge id of the offending class
  int witness_element = -1;
  std::string message;
};

// Opposite-edge classes, greedily colored in ascending class order.
LabelingOutcome compute_direction_labeling(const TMesh& mesh);

// Checks the labels stored on the mesh. Edges on the same side of an element
// count as opposite edges.
Report validate_labeling(const TMesh& mesh);

// Compute and store labels unless the document already brought some.
// Throws if the mesh is totally unstructured.
void ensure_labels(TMesh& mesh);

}  // namespace tsp
