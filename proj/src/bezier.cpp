#include "tspline/bezier.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace tsp {

namespace {

// The single edge whose opposite side holds two edges.
int extension_edge(const TMesh& m, int q) {
  const ElementRec& Q = m.element(q);
  int found = -1;
  for (int s = 0; s < 4; ++s) {
    const auto& side = Q.sides[s];
    const auto& opp = Q.sides[(s + 2) % 4];
    if (side.size() == 1 && opp.size() == 2) {
      if (found >= 0) return -1;
      found = side[0];
    }
  }
  return found;
}

bool well_formed(const TMesh& m, int q) {
  size_t ne = m.element_edges(q).size(), nn = m.element_nodes(q).size();
  return ne == nn && ne >= 4 && ne <= 5;
}

}  // namespace

TMesh bezier_mesh(const TMesh& input, BezierStats* stats) {
  const TMesh& control = input.control_mesh() ? *input.control_mesh() : input;
  auto keep = std::make_shared<const TMesh>(control);
  TMesh m = control;
  BezierStats st;
  int rounds = (m.degree() + 1) / 2;
  std::set<int> malformed;
  auto note = [&](int q) {
    if (m.element(q).active && !well_formed(m, q)) malformed.insert(q);
  };
  for (int j = 0; j < rounds; ++j) {
    for (int q : m.active_elements()) note(q);
    // Extension edges are taken from the mesh at the start of the round. An
    // element already touched by another extension this round can have two
    // sides facing split sides, and its edge would no longer be unique.
    std::vector<std::pair<int, int>> todo;
    for (int q : m.active_elements())
      if (m.element_edges(q).size() == 5 && m.element_nodes(q).size() == 5) {
        int e = extension_edge(m, q);
        if (e < 0)
          throw std::logic_error("bezier: element " + std::to_string(q) +
                                 " has five edges but no unique edge with two opposite edges");
        todo.push_back({q, e});
      }
    for (auto [q, e] : todo) {
      if (!m.edge(e).active) continue;  // bisected by an earlier extension this round
      bool near = false;
      for (int n : m.element_nodes(q)) {
        NodeKind k = m.classify(n);
        if (k == NodeKind::TNode || k == NodeKind::INode) near = true;
      }
      if (!near) ++st.subdivisions_off_tnodes;
      SubdivResult r = m.subdiv(e);
      st.subdivided.push_back(e);
      for (int q2 : m.node(r.mid_node).elems) note(q2);
      for (int q2 : r.split_elements) note(q2);
      for (int n : m.edge(e).nodes)
        for (int q2 : m.node(n).elems) note(q2);
    }
    ++st.iterations;
  }
  for (int q : m.active_elements()) note(q);
  st.malformed_elements = int(malformed.size());
  m.set_control_mesh(keep);
  if (stats) *stats = st;
  return m;
}

std::map<int, int> continuity_map(const TMesh& bezier, const std::vector<int>& evs) {
  int p = bezier.degree();
  std::vector<int> seed;
  for (int v : evs) {
    const auto& es = bezier.node(v).edges;
    seed.insert(seed.end(), es.begin(), es.end());
  }
  auto c0 = edge_prolongation(bezier, seed, p - 1);
  std::map<int, int> out;
  for (int e : bezier.active_edges()) out[e] = std::binary_search(c0.begin(), c0.end(), e) ? 0 : p - 1;
  return out;
}

}  // namespace tsp
