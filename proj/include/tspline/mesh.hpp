#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "tspline/grid.hpp"

namespace tsp {

enum class NodeKind { Regular, TNode, INode, Extraordinary };
const char* to_string(NodeKind k);

struct NodeRec {
  int id = -1;
  GridPoint pos;  // canonical
  bool initial = false;
  bool boundary = false;
  bool extraordinary = false;  // frozen from the initial mesh
  std::optional<std::array<double, 2>> xy;
  std::vector<int> elems;  // active elements whose closure holds the node
  std::vector<int> edges;  // active edges ending at the node
};

struct EdgeRec {
  int id = -1;
  std::array<int, 2> nodes{-1, -1};
  int level = 0;
  std::vector<int> di;  // sorted, unique; empty until labeled
  int parent = -1;
  std::array<int, 2> children{-1, -1};
  bool active = true;
  bool boundary = false;
  // endpoints in the coordinates of one host
  int host = -1;
  int64_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  GridPoint mid;           // canonical midpoint
  std::vector<int> elems;  // active elements having this edge on a side

  int min_di() const { return di.front(); }
  int max_di() const { return di.back(); }
};

struct ElementRec {
  int id = -1;
  int host = -1;
  int64_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // host rectangle
  // side s runs from corner s to corner s+1; edges in traversal order
  std::array<std::vector<int>, 4> sides;
  std::array<int, 4> corners{-1, -1, -1, -1};
  int parent = -1;
  std::array<int, 2> children{-1, -1};
  bool active = true;

  // number of bisections along host x / host y
  int bisections_x() const;
  int bisections_y() const;
};

struct SubdivResult {
  int mid_node = -1;
  std::array<int, 2> children{-1, -1};
  std::vector<int> split_edges;  // connecting edges created by element splits
  std::vector<int> split_elements;
};

struct MeshDocument {
  int degree = 1;
  std::vector<std::optional<std::array<double, 2>>> xy;
  std::vector<std::array<int, 4>> elements;
  // keyed by (min node, max node)
  std::vector<std::pair<std::array<int, 2>, std::vector<int>>> direction_labels;
};

class TMesh {
 public:
  TMesh() = default;

  static TMesh from_initial(const MeshDocument& doc);
  static TMesh from_json(const nlohmann::ordered_json& j);
  static TMesh load(const std::string& path);
  nlohmann::ordered_json to_json() const;
  void save(const std::string& path) const;

  int degree() const { return degree_; }
  void set_degree(int p);
  uint64_t revision() const { return revision_; }
  const InitialTopology& topo() const { return topo_; }

  int num_nodes() const { return int(nodes_.size()); }
  int num_edges() const { return int(edges_.size()); }
  int num_elements() const { return int(elements_.size()); }
  const NodeRec& node(int i) const { return nodes_[i]; }
  const EdgeRec& edge(int i) const { return edges_[i]; }
  const ElementRec& element(int i) const { return elements_[i]; }
  const std::vector<NodeRec>& nodes() const { return nodes_; }
  const std::vector<EdgeRec>& edges() const { return edges_; }
  const std::vector<ElementRec>& elements() const { return elements_; }

  std::vector<int> active_edges() const;
  std::vector<int> active_elements() const;
  int count_active_edges() const;
  bool refined() const { return elements_.size() != size_t(topo_.num_hosts()); }

  // nodes(Q) and edges(Q) of the closure, counterclockwise from corner 0
  std::vector<int> element_nodes(int q) const;
  std::vector<int> element_edges(int q) const;
  int other_node(int e, int n) const;
  int edge_between(int a, int b) const;  // active edge joining a and b, or -1
  int node_at(const GridPoint& canonical) const;

  NodeKind classify(int n) const;
  int valence(int n) const { return int(nodes_[n].elems.size()); }
  std::vector<int> extraordinary_nodes() const;

  // Direction labels
  bool labeled() const { return labeled_; }
  void set_labels(const std::vector<std::vector<int>>& di_per_edge);

  // Bisect an active edge, then split every element that ends up with nodes
  // at both midpoints of a pair of opposite sides.
  SubdivResult subdiv(int e);

  // Active leaf element containing the host point (closed rectangles; ties
  // go to the lowest id).
  int locate(int host, int64_t x, int64_t y) const;
  // Active elements of `host` whose closed rectangle meets the closed box.
  void elements_in_box(int host, int64_t x0, int64_t y0, int64_t x1, int64_t y1,
                       std::vector<int>& out) const;

  // Render position of a host point, interpolated bilinearly from the host
  // corners (requires node positions).
  bool has_positions() const;
  std::array<double, 2> render_xy(int host, double x, double y) const;

  // The initial elements as node-id quadruples.
  const std::vector<std::array<int, 4>>& initial_elements() const { return initial_elements_; }
  int initial_edge_count() const { return initial_edge_count_; }

  // Set on Bezier meshes: the control mesh they were extracted from.
  // Cleared by any further subdivision.
  const TMesh* control_mesh() const { return control_.get(); }
  void set_control_mesh(std::shared_ptr<const TMesh> c) { control_ = std::move(c); }

 private:
  friend TMesh uniform_refine_rebase(const TMesh& mesh);

  int add_node(const GridPoint& canonical, bool initial);
  int add_edge(int a, int b, int host, int64_t x0, int64_t y0, int64_t x1, int64_t y1, int level,
               std::vector<int> di, int parent, bool boundary);
  int add_element(int host, int64_t x0, int64_t y0, int64_t x1, int64_t y1,
                  std::array<std::vector<int>, 4> sides, int parent);
  void attach_element(int q);
  void detach_element(int q);
  bool side_midpoint(int q, int s, size_t& split_at) const;
  void try_split(int q, std::vector<int>& new_edges, std::vector<int>& new_elements);
  void split_element(int q, bool vertical, size_t b_at, size_t t_at, std::vector<int>& new_edges,
                     std::vector<int>& new_elements);
  void build_from_initial(const MeshDocument& doc);

  int degree_ = 1;
  int initial_edge_count_ = 0;
  uint64_t revision_ = 0;
  bool labeled_ = false;
  InitialTopology topo_;
  std::vector<std::array<int, 4>> initial_elements_;
  std::vector<NodeRec> nodes_;
  std::vector<EdgeRec> edges_;
  std::vector<ElementRec> elements_;
  std::unordered_map<GridPoint, int, GridPointHash> node_at_;
  std::shared_ptr<const TMesh> control_;
};

int level_from_length(int64_t len);

// Validation reports collect every violation as text.
struct Report {
  std::string check;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  nlohmann::ordered_json to_json() const;
};

MeshDocument parse_document(const nlohmann::ordered_json& j);

// Regularity of an unrefined mesh plus the EV separation and structured
// anchor disk conditions.
Report validate_regular(const TMesh& mesh);
Report check_closure_regularity(const TMesh& mesh);
Report check_ev_separation(const TMesh& mesh);
Report check_anchor_disks(const TMesh& mesh);

std::vector<int> k_disk(const TMesh& mesh, int node, int k);
std::vector<int> k_disk_multi(const TMesh& mesh, const std::vector<int>& nodes, int k);
// True if every active element around `node` belongs to `elems` (sorted).
bool node_inside(const TMesh& mesh, int node, const std::vector<int>& elems);
std::vector<int> edge_prolongation(const TMesh& mesh, const std::vector<int>& seed, int order);

// Mesh distance between two grid points in level-0 units, or nullopt if
// larger than `radius`.
std::optional<double> mesh_dist(const TMesh& mesh, const GridPoint& a, const GridPoint& b,
                                double radius);

// Active edges whose midpoints lie within half_width * 2^-level of `center`.
// With chart_shortcut, flat surroundings are measured in the sup norm of a
// local chart instead of by search on the virtual grid.
std::vector<int> edges_within(const TMesh& mesh, const GridPoint& center, int level,
                              int64_t half_width, bool chart_shortcut = true);
// N(T,E): radius (p+1)/2 * 2^-level(E) around the midpoint of E.
std::vector<int> edge_neighborhood(const TMesh& mesh, int e);

// Distances from `a` to several targets in level-0 units. Each result is an
// interval [lo, hi] (lo == hi when exact); hi is infinite when the target is
// at least `cutoff` away. Coarse targets seen from a fine source are bracketed
// from a snapped source first and resolved exactly only when the bracket
// straddles the cutoff.
struct DistBounds {
  double lo = 0;
  double hi = 0;
};
std::vector<DistBounds> distances_from(const TMesh& mesh, const GridPoint& a,
                                       const std::vector<GridPoint>& targets,
                                       const std::vector<double>& cutoffs);

TMesh uniform_refine_rebase(const TMesh& mesh);

}  // namespace tsp
