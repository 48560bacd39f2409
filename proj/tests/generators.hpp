#pragma once

// Small random generators shared by the property tests.

#include <algorithm>
#include <random>
#include <vector>

#include "tspline/direction.hpp"
#include "tspline/mesh.hpp"
#include "tspline/refine.hpp"

namespace gen {

// Sorted knot vector of size n with values on a coarse lattice, so repeated
// knots show up regularly.
inline std::vector<double> knots(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> step(0, 3);
  std::vector<double> k(n);
  double t = std::uniform_int_distribution<int>(-8, 8)(rng) * 0.25;
  for (auto& x : k) {
    x = t;
    t += step(rng) * 0.25;
  }
  if (k.back() == k.front()) k.back() += 0.25;  // keep a nonempty support
  return k;
}

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

// Refine `marks` random active edges (labels computed first).
inline tsp::RefineTrace refine_randomly(tsp::TMesh& m, int marks, uint64_t seed) {
  tsp::ensure_labels(m);
  std::mt19937_64 rng(seed);
  tsp::RefineTrace trace;
  trace.degree = m.degree();
  trace.initial_active_edges = m.count_active_edges();
  for (int i = 0; i < marks; ++i) {
    auto act = m.active_edges();
    tsp::refine(m, act[rng() % act.size()], &trace);
    ++trace.marks;
  }
  return trace;
}

}  // namespace gen
