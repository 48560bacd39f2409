#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tspline/mesh.hpp"

namespace tsp {

// Degree p B-spline on p+2 nondecreasing knots, or its deriv-th derivative.
// Right-continuous, except that the last knot belongs to the support.
double bspline_eval(const std::vector<double>& knots, double x, int deriv = 0);

// Point given by host coordinates (host units, kScale per host side).
struct HostPoint {
  int host = -1;
  double x = 0;
  double y = 0;
};

// Host point of local coordinates (u, v) in [0,1]^2 of an element.
HostPoint element_point(const TMesh& mesh, int element, double u, double v);

// Structured layout around an anchor node. Coordinates are level-0 units
// with the anchor at the origin.
struct Chart {
  int anchor = -1;
  std::map<int, Placement> placements;  // host -> placement (host units)
  std::array<double, 4> box{};          // xlo, xhi, ylo, yhi of the support
  std::vector<double> kv_u, kv_v;       // p+2 knots each

  std::optional<std::array<double, 2>> to_chart(const HostPoint& q) const;
};

struct ChartError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Local knot vectors of `anchor` from the element boundaries met by the two
// axis lines through it, continued with the last interval past the domain
// boundary, and the layout of the open support box. Throws ChartError when
// the surroundings are not a plain grid.
Chart build_chart(const TMesh& mesh, int anchor);

// Charts keyed by (anchor, mesh revision).
class ChartCache {
 public:
  const Chart& get(const TMesh& mesh, int anchor);
  size_t size() const { return charts_.size(); }

 private:
  std::map<std::pair<int, uint64_t>, Chart> charts_;
};

// Layout of the p-disk of an extraordinary node as k (or k+1 on the
// boundary) coordinate planes. Sector s maps to dimensions s and s+1, in
// element units of the disk.
struct Embedding {
  int ev = -1;
  int valence = 0;
  bool boundary = false;
  int dims = 0;
  int degree = 1;
  int level = 0;           // level of the disk edges
  int64_t cell = kScale;   // element size in host units
  struct Sector {
    int element = -1;      // element at the node
    int a_spoke = -1;      // edge along the first axis
    int b_spoke = -1;      // edge along the second axis
    std::map<int, Placement> placements;  // host -> sector chart (host units)
  };
  std::vector<Sector> sectors;
  std::vector<std::vector<int>> anchors;  // multi-indices, sorted

  // Embedded coordinates of a host point, or nullopt outside the disk.
  std::optional<std::vector<double>> embed(const HostPoint& q) const;
};

struct EmbeddingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The multi-indices of one or two adjacent free coordinates in [-r, r],
// all others -r. Planes wrap around for interior nodes only.
std::vector<std::vector<int>> ev_anchor_indices(int dims, int r, bool wrap);

Embedding build_ev_embedding(const TMesh& mesh, int ev);

// Product of uniform B-splines with integer knots centered at `index`.
double ev_trace_eval(const std::vector<int>& index, int p, const std::vector<double>& x);

struct BasisFn {
  enum class Kind { Structured, EVTrace } kind = Kind::Structured;
  int anchor = -1;           // node id (structured)
  int chart = -1;            // index into Basis::charts
  int embedding = -1;        // index into Basis::embeddings
  std::vector<int> index;    // multi-index (EV trace)
};

class Basis {
 public:
  int degree = 1;
  std::vector<BasisFn> fns;
  std::vector<Chart> charts;
  std::vector<Embedding> embeddings;

  size_t size() const { return fns.size(); }
  double eval(size_t i, const HostPoint& q) const;
  // Functions whose support window holds the point (a superset of the
  // nonzero ones), ascending.
  void candidates(const HostPoint& q, std::vector<int>& out) const;

  void build_index();

 private:
  struct Window {
    int fn;
    double x0, x1, y0, y1;
  };
  std::unordered_map<int, std::vector<Window>> by_host_;
};

// Anchors: active nodes not strictly inside the (p+1)/2-disk of any
// extraordinary node, measured in the node's embedding (so boundary nodes on
// the rim of the disk stay anchors).
std::vector<int> structured_anchors(const TMesh& mesh);

// One structured function per anchor, then the EV traces per extraordinary
// node in ascending node order.
Basis assemble_basis(const TMesh& mesh, ChartCache* cache = nullptr);

}  // namespace tsp
