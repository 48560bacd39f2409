#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "tspline/mesh.hpp"

namespace tsp {

// A new edge still active when its record closed, with the mesh distance
// from the record's edge as an interval. dist_hi is infinite when the edge
// lies at or beyond the locality bound for its level.
struct ProducedEdge {
  int id = -1;
  int level = 0;
  GridPoint mid;
  double dist_lo = 0;
  double dist_hi = 0;
};

struct TraceRecord {
  int mark = -1;
  int mark_level = 0;
  std::vector<int> mark_di;
  GridPoint mark_mid;
  std::string source = "mark";  // "mark" or "ev_disk"
  bool absorbed = false;        // mark was already inactive when reached
  std::vector<ProducedEdge> produced;
  std::vector<int> subdivided;  // in subdivision order
  int K = 0;                    // distinct direction-index sets among `subdivided`
  int active_edges_after = 0;
};

struct RefineTrace {
  int degree = 1;
  int initial_active_edges = 0;  // #E_0
  int marks = 0;                 // user marks, absorbed ones included
  std::vector<TraceRecord> records;

  nlohmann::ordered_json to_json() const;
  static RefineTrace from_json(const nlohmann::ordered_json& j);
};

// 1/2 + 2(p+1) / (2^(1/K) (2^(1/K) - 1))
double locality_constant(int p, int K);

struct RefineOptions {
  int level_cap = 30;
  bool enforce_ev_disks = true;
};

// Radius (in element rings) of the disk kept level-uniform around each
// extraordinary node: p plus the reach of a Bezier extension.
int ev_disk_radius(int p);

// Single bisection without the refinement guard.
SubdivResult subdiv(TMesh& mesh, int e);

// Recursive refinement of one edge. Appends records to `trace` when given.
void refine(TMesh& mesh, int e, RefineTrace* trace = nullptr, const RefineOptions& opt = {});

// Sequential refine over `marks`; marks that are inactive by the time they
// are reached are recorded as absorbed.
RefineTrace refine_batch(TMesh& mesh, const std::vector<int>& marks,
                         const RefineOptions& opt = {});

// Refine inside the disk around `ev` until all its edges share one level.
// Returns the number of refine calls made.
int enforce_ev_disk(TMesh& mesh, int ev, RefineTrace* trace = nullptr,
                    const RefineOptions& opt = {});

// Edges of the elements in the enforcement disk of `ev`.
std::vector<int> ev_disk_edges(const TMesh& mesh, int ev);

}  // namespace tsp
