#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "tspline/mesh.hpp"

namespace tsp {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int64_t floor_div(int64_t a, int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

bool contains(const std::vector<int>& sorted, int x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

}  // namespace

std::vector<int> k_disk_multi(const TMesh& mesh, const std::vector<int>& nodes, int k) {
  if (k < 1) throw std::invalid_argument("k-disk needs k >= 1");
  std::vector<int> disk;
  for (int n : nodes) disk.insert(disk.end(), mesh.node(n).elems.begin(), mesh.node(n).elems.end());
  disk = sorted_unique(disk);
  for (int step = 2; step <= k; ++step) {
    std::vector<int> ns;
    for (int q : disk) {
      auto en = mesh.element_nodes(q);
      ns.insert(ns.end(), en.begin(), en.end());
    }
    std::vector<int> next;
    for (int n : sorted_unique(ns))
      next.insert(next.end(), mesh.node(n).elems.begin(), mesh.node(n).elems.end());
    disk = sorted_unique(next);
  }
  return disk;
}

std::vector<int> k_disk(const TMesh& mesh, int node, int k) { return k_disk_multi(mesh, {node}, k); }

bool node_inside(const TMesh& mesh, int node, const std::vector<int>& elems) {
  for (int q : mesh.node(node).elems)
    if (!contains(elems, q)) return false;
  return !mesh.node(node).elems.empty();
}

std::vector<int> edge_prolongation(const TMesh& mesh, const std::vector<int>& seed, int order) {
  if (order < 0) throw std::invalid_argument("negative prolongation order");
  std::vector<int> cur = sorted_unique(seed);
  for (int it = 0; it < order; ++it) {
    std::vector<int> next = cur;
    for (int e : cur) {
      const auto& E = mesh.edge(e);
      for (int n : E.nodes)
        for (int f : mesh.node(n).edges) {
          if (f == e) continue;
          bool shared = false;
          for (int q : mesh.edge(f).elems)
            if (std::find(E.elems.begin(), E.elems.end(), q) != E.elems.end()) shared = true;
          if (!shared) next.push_back(f);
        }
    }
    next = sorted_unique(next);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

std::optional<double> mesh_dist(const TMesh& mesh, const GridPoint& a, const GridPoint& b,
                                double radius) {
  return mesh_dist(mesh.topo(), a, b, radius);
}

Report check_closure_regularity(const TMesh& mesh) {
  Report r;
  r.check = "regular_mesh";
  for (int q : mesh.active_elements()) {
    size_t ne = mesh.element_edges(q).size(), nn = mesh.element_nodes(q).size();
    if (ne != 4 || nn != 4)
      r.violations.push_back("element " + std::to_string(q) + " has " + std::to_string(ne) +
                             " edges and " + std::to_string(nn) + " nodes");
  }
  // pairs of elements that share at least one node
  std::set<std::pair<int, int>> pairs;
  for (auto& n : mesh.nodes())
    for (size_t i = 0; i < n.elems.size(); ++i)
      for (size_t j = i + 1; j < n.elems.size(); ++j)
        pairs.insert({std::min(n.elems[i], n.elems[j]), std::max(n.elems[i], n.elems[j])});
  for (auto [a, b] : pairs) {
    auto na = sorted_unique(mesh.element_nodes(a)), nb = sorted_unique(mesh.element_nodes(b));
    auto ea = sorted_unique(mesh.element_edges(a)), eb = sorted_unique(mesh.element_edges(b));
    std::vector<int> sn, se;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(sn));
    std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(se));
    bool ok = (sn.size() == 1 && se.empty()) || (sn.size() == 2 && se.size() == 1);
    if (!ok)
      r.violations.push_back("elements " + std::to_string(a) + " and " + std::to_string(b) +
                             " share " + std::to_string(se.size()) + " edges and " +
                             std::to_string(sn.size()) + " nodes");
  }
  return r;
}

Report check_ev_separation(const TMesh& mesh) {
  Report r;
  r.check = "ev_separation";
  int p = mesh.degree();
  auto evs = mesh.extraordinary_nodes();
  std::vector<std::vector<int>> disks;
  for (int v : evs) disks.push_back(k_disk(mesh, v, p));
  for (size_t i = 0; i < evs.size(); ++i)
    for (size_t j = i + 1; j < evs.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(disks[i].begin(), disks[i].end(), disks[j].begin(), disks[j].end(),
                            std::back_inserter(common));
      if (!common.empty())
        r.violations.push_back("p-disks of extraordinary nodes " + std::to_string(evs[i]) +
                               " and " + std::to_string(evs[j]) + " overlap in " +
                               std::to_string(common.size()) + " elements");
    }
  return r;
}

// Lay out a set of initial elements by gluing across shared sides, starting
// from `root` placed with `node` at the origin. Returns false on a conflict.
static bool layout_initial(const TMesh& mesh, const std::vector<int>& elems, int node,
                           std::map<std::pair<int64_t, int64_t>, int>& cells, std::string& why) {
  const auto& topo = mesh.topo();
  auto [root, corner] = topo.node_hosts(node).front();
  std::map<int, Placement> placed;
  auto c = corner_xy(corner);
  placed[root] = Placement{0, -c[0], -c[1]};
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int h = queue.front();
    queue.pop_front();
    const Placement& P = placed[h];
    auto a = P.apply(int64_t(0), int64_t(0)), b = P.apply(kScale, kScale);
    std::pair<int64_t, int64_t> cell{floor_div(std::min(a[0], b[0]), kScale),
                                     floor_div(std::min(a[1], b[1]), kScale)};
    auto [it, fresh] = cells.emplace(cell, h);
    if (!fresh && it->second != h) {
      why = "elements " + std::to_string(h) + " and " + std::to_string(it->second) + " overlap";
      return false;
    }
    for (int s = 0; s < 4; ++s) {
      auto link = topo.neighbor(h, s);
      if (link.host < 0 || !std::binary_search(elems.begin(), elems.end(), link.host)) continue;
      Placement Q = topo.glue(P, h, s);
      auto f = placed.find(link.host);
      if (f == placed.end()) {
        placed[link.host] = Q;
        queue.push_back(link.host);
      } else if (f->second != Q) {
        why = "element " + std::to_string(link.host) + " receives two placements";
        return false;
      }
    }
  }
  if (placed.size() != elems.size()) {
    why = "disk is not connected through shared edges";
    return false;
  }
  return true;
}

Report check_anchor_disks(const TMesh& mesh) {
  Report r;
  r.check = "anchor_disks";
  if (mesh.refined()) {
    r.violations.push_back("anchor disk check runs on the initial mesh only");
    return r;
  }
  int p = mesh.degree();
  int half = (p + 1) / 2;
  std::vector<int> excluded;
  for (int v : mesh.extraordinary_nodes()) {
    auto d = k_disk(mesh, v, half);
    for (auto& n : mesh.nodes())
      if (node_inside(mesh, n.id, d)) excluded.push_back(n.id);
  }
  excluded = sorted_unique(excluded);
  for (auto& n : mesh.nodes()) {
    if (contains(excluded, n.id)) continue;
    auto disk = k_disk(mesh, n.id, half);
    std::map<std::pair<int64_t, int64_t>, int> cells;
    std::string why;
    if (!layout_initial(mesh, disk, n.id, cells, why)) {
      r.violations.push_back("disk of anchor " + std::to_string(n.id) + ": " + why);
      continue;
    }
    // The domain boundary may cut the disk; charts continue past it.
    bool cut = n.boundary;
    for (int q : disk)
      for (int m : mesh.element_nodes(q)) cut = cut || mesh.node(m).boundary;
    bool in_box = true;
    for (auto& [c, h] : cells)
      if (c.first < -half || c.first >= half || c.second < -half || c.second >= half) in_box = false;
    if (!in_box)
      r.violations.push_back("disk of anchor " + std::to_string(n.id) +
                             " leaves the parameter box");
    else if (!cut && cells.size() != size_t(4 * half * half))
      r.violations.push_back("disk of anchor " + std::to_string(n.id) + " has " +
                             std::to_string(cells.size()) + " elements instead of " +
                             std::to_string(4 * half * half));
  }
  return r;
}

Report validate_regular(const TMesh& mesh) {
  Report r;
  r.check = "validate_regular";
  for (auto sub : {check_closure_regularity(mesh), check_ev_separation(mesh),
                   check_anchor_disks(mesh)})
    for (auto& v : sub.violations) r.violations.push_back(sub.check + ": " + v);
  return r;
}

TMesh uniform_refine_rebase(const TMesh& mesh) {
  if (mesh.refined()) throw std::logic_error("rebase needs an unrefined mesh");
  MeshDocument doc;
  doc.degree = mesh.degree();
  int nn = mesh.num_nodes();
  int ne = mesh.num_edges();
  for (auto& n : mesh.nodes()) doc.xy.push_back(n.xy);
  auto mean = [](const std::vector<std::optional<std::array<double, 2>>>& pts)
      -> std::optional<std::array<double, 2>> {
    std::array<double, 2> s{0, 0};
    for (auto& p : pts) {
      if (!p) return std::nullopt;
      s[0] += (*p)[0] / double(pts.size());
      s[1] += (*p)[1] / double(pts.size());
    }
    return s;
  };
  for (int e = 0; e < ne; ++e) {
    const auto& E = mesh.edge(e);
    doc.xy.push_back(mean({mesh.node(E.nodes[0]).xy, mesh.node(E.nodes[1]).xy}));
  }
  for (int h = 0; h < mesh.num_elements(); ++h) {
    const auto& c = mesh.element(h).corners;
    doc.xy.push_back(mean({mesh.node(c[0]).xy, mesh.node(c[1]).xy, mesh.node(c[2]).xy,
                           mesh.node(c[3]).xy}));
  }
  std::map<std::array<int, 2>, std::vector<int>> labels;
  auto key = [](int a, int b) { return std::array<int, 2>{std::min(a, b), std::max(a, b)}; };
  for (int h = 0; h < mesh.num_elements(); ++h) {
    const auto& Q = mesh.element(h);
    std::array<int, 4> c = Q.corners, m;
    for (int s = 0; s < 4; ++s) m[s] = nn + Q.sides[s][0];
    int z = nn + ne + h;
    doc.elements.push_back({c[0], m[0], z, m[3]});
    doc.elements.push_back({m[0], c[1], m[1], z});
    doc.elements.push_back({z, m[1], c[2], m[2]});
    doc.elements.push_back({m[3], z, m[2], c[3]});
    if (mesh.labeled()) {
      for (int s = 0; s < 4; ++s) {
        const auto& di = mesh.edge(Q.sides[s][0]).di;
        labels[key(c[s], m[s])] = di;
        labels[key(m[s], c[(s + 1) & 3])] = di;
        // spoke from the center to the midpoint of side s runs parallel to side s+1
        labels[key(z, m[s])] = mesh.edge(Q.sides[(s + 1) & 3][0]).di;
      }
    }
  }
  for (auto& [k, d] : labels) doc.direction_labels.push_back({k, d});
  TMesh out = TMesh::from_initial(doc);
  return out;
}

}  // namespace tsp
