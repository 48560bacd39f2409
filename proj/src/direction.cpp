#include "tspline/direction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace tsp {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // keep the smaller id as representative
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  }
};

}  // namespace

LabelingOutcome compute_direction_labeling(const TMesh& mesh) {
  if (mesh.refined()) throw std::logic_error("labeling is computed on the initial mesh");
  int ne = mesh.num_edges();
  UnionFind uf(ne);
  for (auto& q : mesh.elements()) {
    uf.unite(q.sides[0][0], q.sides[2][0]);
    uf.unite(q.sides[1][0], q.sides[3][0]);
  }
  std::map<int, std::set<int>> adj;
  LabelingOutcome out;
  for (auto& q : mesh.elements()) {
    int a = uf.find(q.sides[0][0]), b = uf.find(q.sides[1][0]);
    if (a == b) {
      if (out.self_adjacent_class < 0 || a < out.self_adjacent_class) {
        out.self_adjacent_class = a;
        out.witness_element = q.id;
      }
      continue;
    }
    adj[a].insert(b);
    adj[b].insert(a);
  }
  if (out.self_adjacent_class >= 0) {
    out.message = "totally unstructured: class of edge " + std::to_string(out.self_adjacent_class) +
                  " meets itself in element " + std::to_string(out.witness_element);
    return out;
  }
  std::map<int, int> color;
  for (int e = 0; e < ne; ++e) {
    int c = uf.find(e);
    if (c != e) continue;  // representatives are the smallest ids, so this is ascending order
    std::set<int> used;
    for (int n : adj[c]) {
      auto it = color.find(n);
      if (it != color.end()) used.insert(it->second);
    }
    int k = 0;
    while (used.count(k)) ++k;
    color[c] = k;
  }
  out.found = true;
  out.labeling.di.resize(ne);
  for (int e = 0; e < ne; ++e) out.labeling.di[e] = {color[uf.find(e)]};
  return out;
}

Report validate_labeling(const TMesh& mesh) {
  Report r;
  r.check = "direction_labeling";
  if (!mesh.labeled()) {
    r.violations.push_back("mesh carries no direction labels");
    return r;
  }
  bool strict = true;
  for (auto& e : mesh.edges())
    if (e.active && e.di.size() != 1) strict = false;
  for (int q : mesh.active_elements()) {
    const auto& Q = mesh.element(q);
    for (int s = 0; s < 4; ++s)
      for (int t = s; t < 4; ++t) {
        bool parallel = (s - t) % 2 == 0;
        for (int e : Q.sides[s])
          for (int f : Q.sides[t]) {
            if (e >= f && s == t) continue;
            const auto& a = mesh.edge(e).di;
            const auto& b = mesh.edge(f).di;
            bool good;
            if (strict)
              good = parallel ? a == b : a != b;
            else if (parallel)
              good = a.back() >= b.front() && a.front() <= b.back();
            else
              good = a.back() < b.front() || a.front() > b.back();
            if (!good)
              r.violations.push_back("element " + std::to_string(q) + ": edges " +
                                     std::to_string(e) + " and " + std::to_string(f) +
                                     (parallel ? " are opposite but labels disagree"
                                               : " are adjacent but labels collide"));
          }
      }
  }
  return r;
}

void ensure_labels(TMesh& mesh) {
  if (mesh.labeled()) return;
  auto res = compute_direction_labeling(mesh);
  if (!res.found) throw std::runtime_error(res.message);
  mesh.set_labels(res.labeling.di);
}

}  // namespace tsp
