#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "tspline/bezier.hpp"
#include "tspline/verify.hpp"

namespace tsp {

namespace {

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Bezier edges on the straight path from node `from` to the grid point `to`,
// both given in the host of element q. Stops early (blocked = true) when the
// Bezier mesh has no edge in that direction, which happens when the path runs
// into an element that another extension already crosses.
std::vector<int> straight_path(const TMesh& b, int host, int from, const GridPoint& to,
                               bool& blocked) {
  const auto& topo = b.topo();
  auto here = topo.in_host(b.node(from).pos, host);
  if (!here) throw std::logic_error("extension: node outside its element host");
  int64_t dx = (to.x > here->x) - (to.x < here->x);
  int64_t dy = (to.y > here->y) - (to.y < here->y);
  std::vector<int> path;
  int n = from;
  while (here->x != to.x || here->y != to.y) {
    int next = -1;
    for (int f : b.node(n).edges) {
      int m = b.other_node(f, n);
      auto q = topo.in_host(b.node(m).pos, host);
      if (!q) continue;
      int64_t ox = q->x - here->x, oy = q->y - here->y;
      bool along = dx ? (oy == 0 && ox * dx > 0) : (ox == 0 && oy * dy > 0);
      if (!along) continue;
      next = f;
      n = m;
      *here = *q;
      break;
    }
    if (next < 0) {
      blocked = true;
      break;
    }
    path.push_back(next);
  }
  return path;
}

int side_of(const ElementRec& q, int e) {
  for (int s = 0; s < 4; ++s)
    if (std::find(q.sides[s].begin(), q.sides[s].end(), e) != q.sides[s].end()) return s;
  return -1;
}

}  // namespace

std::vector<NodeExtension> node_extensions(const TMesh& mesh, const TMesh& bezier) {
  int p = mesh.degree();
  std::vector<NodeExtension> out;
  for (const auto& node : mesh.nodes()) {
    if (node.elems.empty()) continue;
    NodeExtension ext;
    ext.node = node.id;
    for (int q : node.elems) {
      const auto& Q = mesh.element(q);
      if (std::find(Q.corners.begin(), Q.corners.end(), node.id) != Q.corners.end()) continue;
      // node sits inside a side of Q
      int s = -1;
      for (int k = 0; k < 4 && s < 0; ++k)
        for (int e : Q.sides[k])
          if (mesh.edge(e).nodes[0] == node.id || mesh.edge(e).nodes[1] == node.id) s = k;
      const auto& side = Q.sides[s];
      const auto& opp = Q.sides[(s + 2) % 4];
      if (opp.size() != 1)
        throw std::logic_error("extension: element " + std::to_string(q) +
                               " has split sides on both ends");
      for (int e : side)
        if (mesh.edge(e).nodes[0] == node.id || mesh.edge(e).nodes[1] == node.id)
          ext.skeleton.push_back(e);
      ext.skeleton.push_back(opp[0]);
      auto target = mesh.topo().in_host(mesh.edge(opp[0]).mid, Q.host);
      int start = bezier.node_at(node.pos);
      bool blocked = false;
      auto path = straight_path(bezier, Q.host, start, *target, blocked);
      if (blocked) ext.blocked.push_back(q);
      ext.first.insert(ext.first.end(), path.begin(), path.end());
    }
    if (ext.first.empty() && ext.blocked.empty()) continue;
    sort_unique(ext.first);
    sort_unique(ext.skeleton);
    for (int order = 2; order <= (p + 1) / 2; ++order) {
      std::vector<int> grown = ext.skeleton;
      for (int e : ext.skeleton)
        for (int q : mesh.edge(e).elems) {
          const auto& Q = mesh.element(q);
          int s = side_of(Q, e);
          const auto& o = Q.sides[(s + 2) % 4];
          grown.insert(grown.end(), o.begin(), o.end());
        }
      sort_unique(grown);
      ext.skeleton = std::move(grown);
    }
    for (int e : ext.skeleton) {
      const auto& d = mesh.edge(e).di;
      ext.di.insert(ext.di.end(), d.begin(), d.end());
    }
    sort_unique(ext.di);
    ext.edges = edge_prolongation(bezier, ext.first, (p - 1) / 2);
    out.push_back(std::move(ext));
  }
  return out;
}

CheckReport check_analysis_suitability(const TMesh& mesh) {
  CheckReport rep;
  rep.check = "analysis_suitability";
  TMesh bez = bezier_mesh(mesh);
  auto exts = node_extensions(mesh, bez);
  for (const auto& x : exts)
    for (int q : x.blocked)
      rep.violations.push_back({{"node", x.node},
                                {"kind", "blocked"},
                                {"element", q},
                                {"inequality", "extension of node " + std::to_string(x.node) +
                                                   " cannot cross element " + std::to_string(q) +
                                                   " of the Bezier mesh"}});
  for (const auto& x : exts)
    if (x.di.size() != 1) {
      std::string labels;
      for (int d : x.di) labels += (labels.empty() ? "" : ",") + std::to_string(d);
      rep.violations.push_back({{"node", x.node},
                                {"kind", "skeleton_labels"},
                                {"inequality", "|di(sk(ext))| = |{" + labels + "}| != 1"}});
    }
  // Extensions meet iff they share a Bezier node: edges only meet at nodes.
  std::map<int, std::vector<int>> at_node;
  for (size_t i = 0; i < exts.size(); ++i) {
    std::vector<int> nodes;
    for (int e : exts[i].edges) {
      nodes.push_back(bez.edge(e).nodes[0]);
      nodes.push_back(bez.edge(e).nodes[1]);
    }
    sort_unique(nodes);
    for (int n : nodes) at_node[n].push_back(int(i));
  }
  std::set<std::pair<int, int>> seen;
  int same_index = 0;
  for (const auto& [n, list] : at_node)
    for (size_t a = 0; a < list.size(); ++a)
      for (size_t b = a + 1; b < list.size(); ++b) {
        if (!seen.insert({list[a], list[b]}).second) continue;
        const auto& xa = exts[list[a]];
        const auto& xb = exts[list[b]];
        if (xa.di == xb.di) {
          ++same_index;
          continue;
        }
        rep.violations.push_back(
            {{"nodes", {xa.node, xb.node}},
             {"kind", "crossing"},
             {"bezier_node", n},
             {"inequality", "ext(" + std::to_string(xa.node) + ") ∩ ext(" +
                                std::to_string(xb.node) + ") != {} with di " +
                                std::to_string(xa.di.front()) + " vs " +
                                std::to_string(xb.di.front())}});
      }
  rep.info["extensions"] = exts.size();
  rep.info["same_index_touching_pairs"] = same_index;
  return rep;
}

CheckReport check_bezier_invariants(const TMesh& mesh) {
  CheckReport rep;
  rep.check = "bezier_invariants";
  BezierStats st;
  TMesh b = bezier_mesh(mesh, &st);
  if (st.malformed_elements)
    rep.violations.push_back({{"kind", "element_shape"},
                              {"inequality", std::to_string(st.malformed_elements) +
                                                 " elements with #edges != #nodes or outside {4,5}"}});
  auto rects = [](const TMesh& m) {
    std::vector<std::array<int64_t, 5>> r;
    for (int q : m.active_elements()) {
      const auto& Q = m.element(q);
      r.push_back({Q.host, Q.x0, Q.y0, Q.x1, Q.y1});
    }
    std::sort(r.begin(), r.end());
    return r;
  };
  auto rb = rects(b);
  if (rects(bezier_mesh(b)) != rb)
    rep.violations.push_back({{"kind", "idempotence"}, {"inequality", "bezier(bezier(T)) != bezier(T)"}});
  bool hanging = false;
  for (const auto& n : mesh.nodes())
    if (!n.elems.empty()) {
      auto k = mesh.classify(n.id);
      hanging |= k == NodeKind::TNode || k == NodeKind::INode;
    }
  if (!hanging && rects(mesh) != rb)
    rep.violations.push_back({{"kind", "identity"}, {"inequality", "bezier(T) != T without hanging nodes"}});
  rep.info["malformed_elements"] = st.malformed_elements;
  rep.info["iterations"] = st.iterations;
  rep.info["subdivisions"] = st.subdivided.size();
  rep.info["hanging_nodes"] = hanging;
  return rep;
}

}  // namespace tsp
