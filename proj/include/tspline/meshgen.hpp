#pragma once

#include "tspline/mesh.hpp"

namespace tsp {

// Structured nx x ny grid of unit squares.
MeshDocument grid_document(int nx, int ny, int degree);

// k structured n x n sectors around one node of valence k.
MeshDocument star_document(int k, int n, int degree);

// Pentagonal annulus of 15 quads, one layer thick: a quad at every outer
// corner and two quads along every side. The five inner corners have three
// neighboring quads.
MeshDocument ring_document(int degree);

// 4x4 grid with the top right 2x2 block removed; the right sides of the two
// lower rows are glued to the top sides of the two left columns. No strict
// direction labeling exists.
MeshDocument twisted_document(int degree);

// Set-valued labeling of twisted_document that is admissible.
std::vector<std::pair<std::array<int, 2>, std::vector<int>>> twisted_labels();

}  // namespace tsp
