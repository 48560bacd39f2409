#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "json.hpp"
#include "tspline/basis.hpp"
#include "tspline/mesh.hpp"
#include "tspline/refine.hpp"

namespace tsp {

// Result of one property check. Violations carry ids and the offending
// inequality with numbers filled in; `info` holds measured quantities.
struct CheckReport {
  std::string check;
  std::vector<nlohmann::ordered_json> violations;
  nlohmann::ordered_json info = nlohmann::ordered_json::object();

  bool passed() const { return violations.empty(); }
  nlohmann::ordered_json to_json() const;
};

// ---- level bounds inside edge neighborhoods

// Level window for E' in N(E): di(E') < di(E) -> [l, l+1]; equal -> [l-1, l+1];
// greater -> [l-1, l]. Set labels compare by max < min.
CheckReport check_quasi_uniformity(const TMesh& mesh);
CheckReport check_quasi_uniformity_serial(const TMesh& mesh);

// ---- refinement traces

CheckReport check_locality(const RefineTrace& trace, const TMesh& mesh);
struct ComplexityOptions {
  double ceiling = 64;
  int tail = 50;  // running maximum must already be reached before the last `tail` marks
};
CheckReport check_complexity_ratio(const RefineTrace& trace, const ComplexityOptions& opt = {});

// ---- basis

// Collocation matrix: one row per sample point, one column per function.
// Points are a (p+1)x(p+1) interior tensor grid of every active element of
// `bezier`; elements are ordered by host, then in Morton order.
Eigen::SparseMatrix<double> collocation_matrix(const TMesh& bezier, const Basis& basis,
                                               const std::vector<int>& fns = {});
Eigen::SparseMatrix<double> collocation_matrix_serial(const TMesh& bezier, const Basis& basis,
                                                      const std::vector<int>& fns = {});

struct RankResult {
  int rank = 0;
  int cols = 0;
  std::string method;
  int fronts = 0;  // blocks factored on the way up
  double max_pivot = 0;
  double min_pivot = 0;   // smallest pivot counted in the rank
};
// Number of pivots above tol after scaling columns to unit norm (so tol is
// relative to the largest possible pivot). Column-pivoted QR runs on local
// blocks of 64-row chunks merged pairwise; rows that touch the same columns
// should be close together for speed.
RankResult numerical_rank(const Eigen::SparseMatrix<double>& m, double tol = 1e-9);

struct LinearIndependenceOptions {
  double tol = 1e-9;
  std::vector<int> subset;  // empty: all functions
};
CheckReport check_linear_independence(const TMesh& bezier, const Basis& basis,
                                      const LinearIndependenceOptions& opt = {});

// Elements away from the p-disks of boundary and extraordinary nodes.
std::vector<int> reproduction_eligible(const TMesh& mesh);
CheckReport check_poly_reproduction(const TMesh& mesh, const Basis& basis, int element,
                                    double tol = 1e-9);

// check_poly_reproduction on up to `count` eligible elements drawn with `seed`.
CheckReport check_poly_reproduction_sample(const TMesh& mesh, const Basis& basis, int count,
                                           uint64_t seed, double tol = 1e-9);

struct SmoothnessOptions {
  int samples = 100;
  uint64_t seed = 7;
  double deriv_tol = 1e-8;
  double value_tol = 1e-10;
};
// One-sided derivatives across random interior edges of the Bezier mesh,
// up to the order given by continuity_map.
CheckReport check_smoothness(const TMesh& bezier, const Basis& basis,
                             const SmoothnessOptions& opt = {});

// ---- extensions

struct NodeExtension {
  int node = -1;
  std::vector<int> first;     // first-order extension, Bezier edge ids
  std::vector<int> edges;     // prolonged extension, Bezier edge ids
  std::vector<int> skeleton;  // control edge ids
  std::vector<int> di;        // union of skeleton labels
  std::vector<int> blocked;   // control elements the straight path could not cross
};
// Extensions of all T- and I-nodes of a control mesh, measured on its
// Bezier mesh.
std::vector<NodeExtension> node_extensions(const TMesh& mesh, const TMesh& bezier);
CheckReport check_analysis_suitability(const TMesh& mesh);

// Edge counts during extraction, idempotence, and identity on meshes
// without hanging nodes.
CheckReport check_bezier_invariants(const TMesh& mesh);

// ---- everything at once

struct SuiteOptions {
  int reproduction_elements = 20;
  int smoothness_samples = 100;
  uint64_t seed = 7;
  ComplexityOptions complexity;
};
// Mesh checks, Bezier checks and basis checks (plus locality and complexity
// when a trace is given). Result: {"status", "checks": [reports]}.
nlohmann::ordered_json verify_suite(const TMesh& mesh, const RefineTrace* trace,
                                    const SuiteOptions& opt = {});

}  // namespace tsp
