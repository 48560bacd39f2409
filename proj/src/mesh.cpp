#include "tspline/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tsp {

using json = nlohmann::ordered_json;

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Regular: return "regular";
    case NodeKind::TNode: return "T-node";
    case NodeKind::INode: return "I-node";
    default: return "extraordinary";
  }
}

int level_from_length(int64_t len) {
  if (len <= 0 || (len & (len - 1)) != 0 || len > kScale)
    throw std::logic_error("edge length is not a dyadic fraction of the host size");
  return kDepth - __builtin_ctzll(uint64_t(len));
}

int ElementRec::bisections_x() const { return level_from_length(x1 - x0); }
int ElementRec::bisections_y() const { return level_from_length(y1 - y0); }

void TMesh::set_degree(int p) {
  if (p < 1 || p % 2 == 0) throw std::invalid_argument("degree must be odd and >= 1");
  degree_ = p;
}

int TMesh::add_node(const GridPoint& canonical, bool initial) {
  NodeRec n;
  n.id = int(nodes_.size());
  n.pos = canonical;
  n.initial = initial;
  nodes_.push_back(n);
  node_at_[canonical] = n.id;
  return n.id;
}

int TMesh::add_edge(int a, int b, int host, int64_t x0, int64_t y0, int64_t x1, int64_t y1,
                    int level, std::vector<int> di, int parent, bool boundary) {
  EdgeRec e;
  e.id = int(edges_.size());
  e.nodes = {a, b};
  e.level = level;
  e.di = std::move(di);
  e.parent = parent;
  e.boundary = boundary;
  e.host = host;
  e.x0 = x0;
  e.y0 = y0;
  e.x1 = x1;
  e.y1 = y1;
  e.mid = topo_.canonical({host, (x0 + x1) / 2, (y0 + y1) / 2});
  edges_.push_back(std::move(e));
  return int(edges_.size()) - 1;
}

int TMesh::add_element(int host, int64_t x0, int64_t y0, int64_t x1, int64_t y1,
                       std::array<std::vector<int>, 4> sides, int parent) {
  ElementRec q;
  q.id = int(elements_.size());
  q.host = host;
  q.x0 = x0;
  q.y0 = y0;
  q.x1 = x1;
  q.y1 = y1;
  q.sides = std::move(sides);
  q.parent = parent;
  // corner s is shared by the last edge of side s-1 and the first of side s
  for (int s = 0; s < 4; ++s) {
    const EdgeRec& ep = edges_[q.sides[(s + 3) & 3].back()];
    const EdgeRec& ec = edges_[q.sides[s].front()];
    int c = -1;
    for (int a : ep.nodes)
      for (int b : ec.nodes)
        if (a == b) c = a;
    if (c < 0) throw std::logic_error("element sides do not close up");
    q.corners[s] = c;
  }
  elements_.push_back(std::move(q));
  return int(elements_.size()) - 1;
}

int TMesh::other_node(int e, int n) const {
  const auto& r = edges_[e];
  return r.nodes[0] == n ? r.nodes[1] : r.nodes[0];
}

std::vector<int> TMesh::element_nodes(int q) const {
  const auto& Q = elements_[q];
  std::vector<int> out;
  for (int s = 0; s < 4; ++s) {
    int n = Q.corners[s];
    out.push_back(n);
    for (size_t i = 0; i + 1 < Q.sides[s].size(); ++i) {
      n = other_node(Q.sides[s][i], n);
      out.push_back(n);
    }
  }
  return out;
}

std::vector<int> TMesh::element_edges(int q) const {
  std::vector<int> out;
  for (auto& s : elements_[q].sides) out.insert(out.end(), s.begin(), s.end());
  return out;
}

int TMesh::edge_between(int a, int b) const {
  for (int e : nodes_[a].edges)
    if (other_node(e, a) == b) return e;
  return -1;
}

int TMesh::node_at(const GridPoint& canonical) const {
  auto it = node_at_.find(canonical);
  return it == node_at_.end() ? -1 : it->second;
}

static void erase_value(std::vector<int>& v, int x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it != v.end()) v.erase(it);
}

void TMesh::attach_element(int q) {
  for (int e : element_edges(q)) edges_[e].elems.push_back(q);
  for (int n : element_nodes(q)) nodes_[n].elems.push_back(q);
}

void TMesh::detach_element(int q) {
  for (int e : element_edges(q)) erase_value(edges_[e].elems, q);
  for (int n : element_nodes(q)) erase_value(nodes_[n].elems, q);
}

std::vector<int> TMesh::active_edges() const {
  std::vector<int> out;
  for (auto& e : edges_)
    if (e.active) out.push_back(e.id);
  return out;
}

int TMesh::count_active_edges() const {
  int c = 0;
  for (auto& e : edges_) c += e.active;
  return c;
}

std::vector<int> TMesh::active_elements() const {
  std::vector<int> out;
  for (auto& q : elements_)
    if (q.active) out.push_back(q.id);
  return out;
}

NodeKind TMesh::classify(int n) const {
  const auto& N = nodes_[n];
  if (N.extraordinary) return NodeKind::Extraordinary;
  if (N.initial) return NodeKind::Regular;
  int c = int(N.elems.size());
  if (N.boundary) return c == 1 ? NodeKind::INode : NodeKind::Regular;
  if (c == 2) return NodeKind::INode;
  if (c == 3) return NodeKind::TNode;
  return NodeKind::Regular;
}

std::vector<int> TMesh::extraordinary_nodes() const {
  std::vector<int> out;
  for (auto& n : nodes_)
    if (n.extraordinary) out.push_back(n.id);
  return out;
}

void TMesh::set_labels(const std::vector<std::vector<int>>& di_per_edge) {
  if (refined()) throw std::logic_error("labels can only be assigned on the initial mesh");
  if (di_per_edge.size() != edges_.size()) throw std::invalid_argument("label count mismatch");
  for (size_t i = 0; i < edges_.size(); ++i) {
    auto d = di_per_edge[i];
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    if (d.empty()) throw std::invalid_argument("empty direction index set");
    edges_[i].di = d;
  }
  labeled_ = true;
  ++revision_;
}

bool TMesh::side_midpoint(int q, int s, size_t& split_at) const {
  const auto& Q = elements_[q];
  int64_t len = (s & 1) ? Q.y1 - Q.y0 : Q.x1 - Q.x0;
  int64_t acc = 0;
  const auto& side = Q.sides[s];
  for (size_t i = 0; i + 1 < side.size(); ++i) {
    acc += kScale >> edges_[side[i]].level;
    if (acc == len / 2) {
      split_at = i + 1;
      return true;
    }
    if (acc > len / 2) return false;
  }
  return false;
}

void TMesh::try_split(int q, std::vector<int>& new_edges, std::vector<int>& new_elements) {
  if (!elements_[q].active) return;
  size_t b, t, r, l;
  if (side_midpoint(q, 0, b) && side_midpoint(q, 2, t))
    split_element(q, true, b, t, new_edges, new_elements);
  else if (side_midpoint(q, 1, r) && side_midpoint(q, 3, l))
    split_element(q, false, r, l, new_edges, new_elements);
}

static std::array<std::vector<int>, 4> sides4(std::vector<int> a, std::vector<int> b,
                                              std::vector<int> c, std::vector<int> d) {
  return {std::move(a), std::move(b), std::move(c), std::move(d)};
}

static std::vector<int> di_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void TMesh::split_element(int q, bool vertical, size_t i0, size_t i2, std::vector<int>& new_edges,
                          std::vector<int>& new_elements) {
  ElementRec Q = elements_[q];
  int sa = vertical ? 0 : 1;
  int sb = vertical ? 2 : 3;
  auto walk = [&](int s, size_t k) {
    int n = Q.corners[s];
    for (size_t i = 0; i < k; ++i) n = other_node(Q.sides[s][i], n);
    return n;
  };
  int na = walk(sa, i0);
  int nb = walk(sb, i2);
  std::vector<int> A1(Q.sides[sa].begin(), Q.sides[sa].begin() + i0);
  std::vector<int> A2(Q.sides[sa].begin() + i0, Q.sides[sa].end());
  std::vector<int> B1(Q.sides[sb].begin(), Q.sides[sb].begin() + i2);
  std::vector<int> B2(Q.sides[sb].begin() + i2, Q.sides[sb].end());

  std::vector<int> di;
  if (labeled_) {
    for (int s : {sa + 1, (sb + 1) & 3})
      for (int e : Q.sides[s]) di = di_union(di, edges_[e].di);
  }
  detach_element(q);
  elements_[q].active = false;

  int et, c1, c2;
  if (vertical) {
    int64_t xm = (Q.x0 + Q.x1) / 2;
    et = add_edge(na, nb, Q.host, xm, Q.y0, xm, Q.y1, level_from_length(Q.y1 - Q.y0), di, -1,
                  false);
    // left child: [B1] [e~] [T2] [L];  right child: [B2] [R] [T1] [e~]
    c1 = add_element(Q.host, Q.x0, Q.y0, xm, Q.y1, sides4(A1, {et}, B2, Q.sides[3]), q);
    c2 = add_element(Q.host, xm, Q.y0, Q.x1, Q.y1, sides4(A2, Q.sides[1], B1, {et}), q);
  } else {
    int64_t ym = (Q.y0 + Q.y1) / 2;
    et = add_edge(nb, na, Q.host, Q.x0, ym, Q.x1, ym, level_from_length(Q.x1 - Q.x0), di, -1,
                  false);
    // bottom child: [B] [R1] [e~] [L2];  top child: [e~] [R2] [T] [L1]
    c1 = add_element(Q.host, Q.x0, Q.y0, Q.x1, ym, sides4(Q.sides[0], A1, {et}, B2), q);
    c2 = add_element(Q.host, Q.x0, ym, Q.x1, Q.y1, sides4({et}, A2, Q.sides[2], B1), q);
  }
  elements_[q].children = {c1, c2};
  nodes_[na].edges.push_back(et);
  nodes_[nb].edges.push_back(et);
  attach_element(c1);
  attach_element(c2);
  new_edges.push_back(et);
  new_elements.push_back(c1);
  new_elements.push_back(c2);
  try_split(c1, new_edges, new_elements);
  try_split(c2, new_edges, new_elements);
}

SubdivResult TMesh::subdiv(int e) {
  if (e < 0 || e >= int(edges_.size())) throw std::out_of_range("unknown edge id");
  if (!edges_[e].active) throw std::logic_error("edge " + std::to_string(e) + " is inactive");
  EdgeRec E = edges_[e];
  if (std::max(std::abs(E.x1 - E.x0), std::abs(E.y1 - E.y0)) < 2)
    throw std::logic_error("edge too short to bisect");
  int64_t mx = (E.x0 + E.x1) / 2, my = (E.y0 + E.y1) / 2;
  GridPoint m = topo_.canonical({E.host, mx, my});
  if (node_at_.count(m)) throw std::logic_error("midpoint node already exists");
  SubdivResult res;
  int a = E.nodes[0], b = E.nodes[1];
  int mn = add_node(m, false);
  res.mid_node = mn;
  nodes_[mn].boundary = E.boundary;
  if (nodes_[a].xy && nodes_[b].xy) {
    auto pa = *nodes_[a].xy, pb = *nodes_[b].xy;
    nodes_[mn].xy = std::array<double, 2>{0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])};
  }
  int c1 = add_edge(a, mn, E.host, E.x0, E.y0, mx, my, E.level + 1, E.di, e, E.boundary);
  int c2 = add_edge(mn, b, E.host, mx, my, E.x1, E.y1, E.level + 1, E.di, e, E.boundary);
  res.children = {c1, c2};
  edges_[e].active = false;
  edges_[e].children = {c1, c2};
  edges_[e].elems.clear();
  erase_value(nodes_[a].edges, e);
  erase_value(nodes_[b].edges, e);
  nodes_[a].edges.push_back(c1);
  nodes_[b].edges.push_back(c2);
  nodes_[mn].edges = {c1, c2};

  for (int q : E.elems) {
    auto& Q = elements_[q];
    bool done = false;
    for (int s = 0; s < 4 && !done; ++s) {
      int n = Q.corners[s];
      auto& side = Q.sides[s];
      for (size_t i = 0; i < side.size(); ++i) {
        if (side[i] == e) {
          std::array<int, 2> rep = n == a ? std::array<int, 2>{c1, c2} : std::array<int, 2>{c2, c1};
          side[i] = rep[0];
          side.insert(side.begin() + i + 1, rep[1]);
          done = true;
          break;
        }
        n = other_node(side[i], n);
      }
    }
    if (!done) throw std::logic_error("edge/element adjacency out of sync");
    edges_[c1].elems.push_back(q);
    edges_[c2].elems.push_back(q);
    nodes_[mn].elems.push_back(q);
  }
  for (int q : E.elems) try_split(q, res.split_edges, res.split_elements);
  control_.reset();
  ++revision_;
  return res;
}

int TMesh::locate(int host, int64_t x, int64_t y) const {
  int q = host;
  while (!elements_[q].active) {
    int next = -1;
    for (int c : elements_[q].children) {
      const auto& C = elements_[c];
      if (x >= C.x0 && x <= C.x1 && y >= C.y0 && y <= C.y1) {
        next = c;
        break;
      }
    }
    if (next < 0) return -1;
    q = next;
  }
  return q;
}

void TMesh::elements_in_box(int host, int64_t x0, int64_t y0, int64_t x1, int64_t y1,
                            std::vector<int>& out) const {
  int stack[128];
  int top = 0;
  stack[top++] = host;
  while (top) {
    int q = stack[--top];
    const auto& Q = elements_[q];
    if (Q.x1 < x0 || Q.x0 > x1 || Q.y1 < y0 || Q.y0 > y1) continue;
    if (Q.active) {
      out.push_back(q);
      continue;
    }
    stack[top++] = Q.children[1];
    stack[top++] = Q.children[0];
  }
}

bool TMesh::has_positions() const {
  for (auto& n : nodes_)
    if (n.initial && !n.xy) return false;
  return !nodes_.empty();
}

std::array<double, 2> TMesh::render_xy(int host, double x, double y) const {
  double u = x / double(kScale), v = y / double(kScale);
  const auto& c = topo_.corners(host);
  std::array<double, 2> out{0, 0};
  double w[4] = {(1 - u) * (1 - v), u * (1 - v), u * v, (1 - u) * v};
  for (int k = 0; k < 4; ++k) {
    const auto& p = *nodes_[c[k]].xy;
    out[0] += w[k] * p[0];
    out[1] += w[k] * p[1];
  }
  return out;
}

// ---------------------------------------------------------------------------
// construction and serialization

MeshDocument parse_document(const json& j) {
  MeshDocument doc;
  if (!j.is_object()) throw std::invalid_argument("mesh document must be a JSON object");
  doc.degree = j.value("degree", 1);
  if (!j.contains("nodes") || !j.contains("elements"))
    throw std::invalid_argument("mesh document needs nodes and elements");
  std::map<int, std::optional<std::array<double, 2>>> nodes;
  for (auto& n : j.at("nodes")) {
    int id = n.at("id").get<int>();
    if (nodes.count(id)) throw std::invalid_argument("duplicate node id " + std::to_string(id));
    std::optional<std::array<double, 2>> xy;
    if (n.contains("xy") && !n.at("xy").is_null())
      xy = std::array<double, 2>{n.at("xy")[0].get<double>(), n.at("xy")[1].get<double>()};
    nodes[id] = xy;
  }
  int count = 0;
  for (auto& [id, xy] : nodes) {
    if (id != count)
      throw std::invalid_argument("node ids must be 0..n-1; missing id " + std::to_string(count));
    doc.xy.push_back(xy);
    ++count;
  }
  std::set<std::array<int, 4>> seen;
  for (auto& e : j.at("elements")) {
    if (e.size() != 4) throw std::invalid_argument("elements must list 4 node ids");
    std::array<int, 4> q;
    for (int k = 0; k < 4; ++k) q[k] = e[k].get<int>();
    for (int k = 0; k < 4; ++k) {
      if (q[k] < 0 || q[k] >= count)
        throw std::invalid_argument("element references undefined node " + std::to_string(q[k]));
      for (int l = 0; l < k; ++l)
        if (q[k] == q[l]) throw std::invalid_argument("degenerate element");
    }
    auto key = q;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) throw std::invalid_argument("duplicate element");
    doc.elements.push_back(q);
  }
  if (j.contains("direction_labels")) {
    for (auto& [key, val] : j.at("direction_labels").items()) {
      auto dash = key.find('-');
      if (dash == std::string::npos) throw std::invalid_argument("bad edge key " + key);
      int a = std::stoi(key.substr(0, dash)), b = std::stoi(key.substr(dash + 1));
      std::vector<int> d;
      if (val.is_array())
        for (auto& x : val) d.push_back(x.get<int>());
      else
        d.push_back(val.get<int>());
      doc.direction_labels.push_back({{std::min(a, b), std::max(a, b)}, d});
    }
  }
  return doc;
}

void TMesh::build_from_initial(const MeshDocument& doc) {
  set_degree(doc.degree);
  int nn = int(doc.xy.size());
  topo_.build(doc.elements, nn);
  initial_elements_ = doc.elements;
  for (int i = 0; i < nn; ++i) {
    if (topo_.node_hosts(i).empty())
      throw std::invalid_argument("node " + std::to_string(i) + " is not used by any element");
    auto [h, k] = topo_.node_hosts(i).front();
    auto c = corner_xy(k);
    int id = add_node(topo_.canonical({h, c[0], c[1]}), true);
    nodes_[id].xy = doc.xy[i];
  }
  std::map<std::pair<int, int>, int> by_key;
  for (int h = 0; h < topo_.num_hosts(); ++h) {
    std::array<std::vector<int>, 4> sides;
    for (int k = 0; k < 4; ++k) {
      int a = doc.elements[h][k], b = doc.elements[h][(k + 1) & 3];
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = by_key.find(key);
      int e;
      if (it == by_key.end()) {
        auto p0 = corner_xy(k), p1 = corner_xy(k + 1);
        e = add_edge(a, b, h, p0[0], p0[1], p1[0], p1[1], 0, {}, -1,
                     topo_.neighbor(h, k).host < 0);
        by_key[key] = e;
        nodes_[a].edges.push_back(e);
        nodes_[b].edges.push_back(e);
      } else {
        e = it->second;
      }
      sides[k] = {e};
    }
    add_element(h, 0, 0, kScale, kScale, sides, -1);
  }
  initial_edge_count_ = int(edges_.size());
  for (int h = 0; h < topo_.num_hosts(); ++h) attach_element(h);
  for (auto& n : nodes_) {
    for (int e : n.edges) n.boundary = n.boundary || edges_[e].boundary;
    int c = int(n.elems.size());
    n.extraordinary = n.boundary ? c > 2 : c != 4;
  }
  if (!doc.direction_labels.empty()) {
    std::vector<std::vector<int>> di(edges_.size());
    for (auto& [key, d] : doc.direction_labels) {
      auto it = by_key.find({key[0], key[1]});
      if (it == by_key.end())
        throw std::invalid_argument("direction label for unknown edge " + std::to_string(key[0]) +
                                    "-" + std::to_string(key[1]));
      di[it->second] = d;
    }
    for (size_t i = 0; i < di.size(); ++i)
      if (di[i].empty()) throw std::invalid_argument("direction labels do not cover every edge");
    set_labels(di);
  }
}

TMesh TMesh::from_initial(const MeshDocument& doc) {
  TMesh m;
  m.build_from_initial(doc);
  return m;
}

static json point_json(const std::optional<std::array<double, 2>>& xy) {
  if (!xy) return nullptr;
  return json::array({(*xy)[0], (*xy)[1]});
}

json TMesh::to_json() const {
  json j;
  j["degree"] = degree_;
  json nodes = json::array();
  for (auto& n : nodes_) {
    json r;
    r["id"] = n.id;
    if (n.xy) r["xy"] = point_json(n.xy);
    if (!n.initial) r["pos"] = json::array({n.pos.host, n.pos.x, n.pos.y});
    nodes.push_back(r);
  }
  j["nodes"] = nodes;
  json elems = json::array();
  for (auto& q : initial_elements_) elems.push_back(json::array({q[0], q[1], q[2], q[3]}));
  j["elements"] = elems;
  if (labeled_) {
    json labels = json::object();
    for (int i = 0; i < initial_edge_count_; ++i) {
      const auto& e = edges_[i];
      int a = std::min(e.nodes[0], e.nodes[1]), b = std::max(e.nodes[0], e.nodes[1]);
      labels[std::to_string(a) + "-" + std::to_string(b)] = e.di;
    }
    j["direction_labels"] = labels;
  }
  if (refined()) {
    json edges = json::array();
    for (auto& e : edges_) {
      json r;
      r["id"] = e.id;
      r["nodes"] = json::array({e.nodes[0], e.nodes[1]});
      r["level"] = e.level;
      r["di"] = e.di;
      r["parent"] = e.parent < 0 ? json(nullptr) : json(e.parent);
      r["children"] = e.children[0] < 0 ? json::array()
                                         : json::array({e.children[0], e.children[1]});
      r["active"] = e.active;
      r["boundary"] = e.boundary;
      r["host"] = e.host;
      r["coords"] = json::array({e.x0, e.y0, e.x1, e.y1});
      edges.push_back(r);
    }
    j["edges"] = edges;
    json recs = json::array();
    for (auto& q : elements_) {
      json r;
      r["id"] = q.id;
      r["host"] = q.host;
      r["rect"] = json::array({q.x0, q.y0, q.x1, q.y1});
      json sides = json::array();
      for (auto& s : q.sides) sides.push_back(s);
      r["sides"] = sides;
      r["parent"] = q.parent < 0 ? json(nullptr) : json(q.parent);
      r["children"] = q.children[0] < 0 ? json::array()
                                         : json::array({q.children[0], q.children[1]});
      r["active"] = q.active;
      recs.push_back(r);
    }
    j["element_records"] = recs;
  }
  return j;
}

TMesh TMesh::from_json(const json& j) {
  if (!j.contains("edges")) return from_initial(parse_document(j));
  // Refined document: rebuild the initial mesh for topology and flags, then
  // replace the history with the stored records.
  MeshDocument doc;
  doc.degree = j.value("degree", 1);
  std::vector<json> refined_nodes;
  for (auto& n : j.at("nodes")) {
    if (n.contains("pos")) {
      refined_nodes.push_back(n);
      continue;
    }
    std::optional<std::array<double, 2>> xy;
    if (n.contains("xy") && !n.at("xy").is_null())
      xy = std::array<double, 2>{n.at("xy")[0].get<double>(), n.at("xy")[1].get<double>()};
    if (n.at("id").get<int>() != int(doc.xy.size()))
      throw std::invalid_argument("initial node ids must come first and be dense");
    doc.xy.push_back(xy);
  }
  for (auto& e : j.at("elements"))
    doc.elements.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()});
  TMesh m;
  m.build_from_initial(doc);
  int n0 = m.num_nodes();
  for (auto& n : refined_nodes) {
    auto p = n.at("pos");
    GridPoint g{p[0].get<int32_t>(), p[1].get<int64_t>(), p[2].get<int64_t>()};
    if (n.at("id").get<int>() != m.num_nodes())
      throw std::invalid_argument("refined node ids must be dense");
    int id = m.add_node(m.topo_.canonical(g), false);
    if (n.contains("xy") && !n.at("xy").is_null())
      m.nodes_[id].xy = std::array<double, 2>{n.at("xy")[0].get<double>(), n.at("xy")[1].get<double>()};
  }
  m.edges_.clear();
  m.elements_.clear();
  for (auto& n : m.nodes_) {
    n.edges.clear();
    n.elems.clear();
  }
  bool labeled = true;
  for (auto& r : j.at("edges")) {
    auto c = r.at("coords");
    std::vector<int> di = r.at("di").get<std::vector<int>>();
    if (di.empty()) labeled = false;
    int id = m.add_edge(r.at("nodes")[0].get<int>(), r.at("nodes")[1].get<int>(),
                        r.at("host").get<int>(), c[0].get<int64_t>(), c[1].get<int64_t>(),
                        c[2].get<int64_t>(), c[3].get<int64_t>(), r.at("level").get<int>(), di,
                        r.at("parent").is_null() ? -1 : r.at("parent").get<int>(),
                        r.at("boundary").get<bool>());
    auto& E = m.edges_[id];
    if (r.at("id").get<int>() != id) throw std::invalid_argument("edge ids must be dense");
    if (!r.at("children").empty())
      E.children = {r.at("children")[0].get<int>(), r.at("children")[1].get<int>()};
    E.active = r.at("active").get<bool>();
    if (E.active) {
      m.nodes_[E.nodes[0]].edges.push_back(id);
      m.nodes_[E.nodes[1]].edges.push_back(id);
    }
  }
  m.labeled_ = labeled && !m.edges_.empty();
  for (auto& r : j.at("element_records")) {
    auto rect = r.at("rect");
    std::array<std::vector<int>, 4> sides;
    for (int s = 0; s < 4; ++s) sides[s] = r.at("sides")[s].get<std::vector<int>>();
    int id = m.add_element(r.at("host").get<int>(), rect[0].get<int64_t>(), rect[1].get<int64_t>(),
                           rect[2].get<int64_t>(), rect[3].get<int64_t>(), sides,
                           r.at("parent").is_null() ? -1 : r.at("parent").get<int>());
    if (r.at("id").get<int>() != id) throw std::invalid_argument("element ids must be dense");
    auto& Q = m.elements_[id];
    if (!r.at("children").empty())
      Q.children = {r.at("children")[0].get<int>(), r.at("children")[1].get<int>()};
    Q.active = r.at("active").get<bool>();
  }
  for (auto& q : m.elements_)
    if (q.active) m.attach_element(q.id);
  for (int i = n0; i < m.num_nodes(); ++i) {
    auto& n = m.nodes_[i];
    for (int e : n.edges) n.boundary = n.boundary || m.edges_[e].boundary;
  }
  ++m.revision_;
  return m;
}

TMesh TMesh::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("malformed JSON: ") + ex.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("malformed mesh document: ") + ex.what());
  }
}

void TMesh::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json().dump(1) << "\n";
}

json Report::to_json() const {
  json j;
  j["check"] = check;
  j["status"] = ok() ? "pass" : "fail";
  j["violations"] = violations;
  return j;
}

}  // namespace tsp
