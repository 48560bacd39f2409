#include "tspline/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace tsp {

using json = nlohmann::ordered_json;

namespace {

// E' must be refined before E
bool guards(const EdgeRec& ep, const EdgeRec& e) {
  if (ep.level != e.level) return ep.level < e.level;
  return ep.max_di() < e.min_di();
}

// The subdivision condition, phrased directly on levels: finer-or-equal for
// non-smaller labels, strictly finer for smaller labels.
bool admissible(const TMesh& mesh, int e, const std::vector<int>& nb) {
  const EdgeRec& E = mesh.edge(e);
  for (int f : nb) {
    const EdgeRec& F = mesh.edge(f);
    bool smaller = F.max_di() < E.min_di();
    if (smaller ? F.level <= E.level : F.level < E.level) return false;
  }
  return true;
}

struct Collect {
  std::vector<int> created;
  std::vector<int> subdivided;
};

std::vector<int> guard_list(const TMesh& mesh, int e) {
  std::vector<int> out;
  const EdgeRec& E = mesh.edge(e);
  for (int f : edge_neighborhood(mesh, e))
    if (f != e && guards(mesh.edge(f), E)) out.push_back(f);
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    const EdgeRec& A = mesh.edge(a);
    const EdgeRec& B = mesh.edge(b);
    if (A.level != B.level) return A.level < B.level;
    if (A.di != B.di) return A.di < B.di;
    return a < b;
  });
  return out;
}

void refine_core(TMesh& mesh, int e, Collect& col, const RefineOptions& opt) {
  struct Frame {
    int edge;
    std::vector<int> todo;
    size_t next = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({e, guard_list(mesh, e)});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (!mesh.edge(f.edge).active) {  // cannot happen for strict orders; be safe
      stack.pop_back();
      continue;
    }
    if (f.next < f.todo.size()) {
      int g = f.todo[f.next++];
      if (!mesh.edge(g).active) continue;
      stack.push_back({g, guard_list(mesh, g)});
      continue;
    }
    // for-loop done: re-evaluate the while condition on the current mesh
    auto again = guard_list(mesh, f.edge);
    if (!again.empty()) {
      f.todo = std::move(again);
      f.next = 0;
      continue;
    }
    const EdgeRec& E = mesh.edge(f.edge);
    if (E.level >= opt.level_cap)
      throw std::runtime_error("refine: level cap " + std::to_string(opt.level_cap) +
                               " reached at edge " + std::to_string(f.edge));
    if (!admissible(mesh, f.edge, edge_neighborhood(mesh, f.edge)))
      throw std::logic_error("refine: inadmissible subdivision of edge " +
                             std::to_string(f.edge));
    int id = f.edge;
    stack.pop_back();
    SubdivResult r = mesh.subdiv(id);
    col.subdivided.push_back(id);
    col.created.push_back(r.children[0]);
    col.created.push_back(r.children[1]);
    col.created.insert(col.created.end(), r.split_edges.begin(), r.split_edges.end());
  }
}

TraceRecord open_record(const TMesh& mesh, int e, const char* source) {
  TraceRecord rec;
  const EdgeRec& E = mesh.edge(e);
  rec.mark = e;
  rec.mark_level = E.level;
  rec.mark_di = E.di;
  rec.mark_mid = E.mid;
  rec.source = source;
  return rec;
}

void close_record(const TMesh& mesh, TraceRecord& rec, const Collect& col) {
  rec.subdivided = col.subdivided;
  std::set<std::vector<int>> labels;
  for (int s : col.subdivided) labels.insert(mesh.edge(s).di);
  rec.K = int(labels.size());
  std::vector<GridPoint> mids;
  std::vector<double> cut;
  for (int c : col.created) {
    const EdgeRec& E = mesh.edge(c);
    if (!E.active) continue;
    ProducedEdge pe;
    pe.id = c;
    pe.level = E.level;
    pe.mid = E.mid;
    rec.produced.push_back(pe);
    mids.push_back(E.mid);
    cut.push_back(locality_constant(mesh.degree(), std::max(rec.K, 1)) *
                  std::ldexp(1.0, -E.level));
  }
  if (!mids.empty()) {
    auto d = distances_from(mesh, rec.mark_mid, mids, cut);
    for (size_t i = 0; i < d.size(); ++i) {
      rec.produced[i].dist_lo = d[i].lo;
      rec.produced[i].dist_hi = d[i].hi;
    }
  }
  rec.active_edges_after = mesh.count_active_edges();
}

void refine_recorded(TMesh& mesh, int e, RefineTrace* trace, const char* source,
                     const RefineOptions& opt) {
  Collect col;
  if (!trace) {
    refine_core(mesh, e, col, opt);
    return;
  }
  TraceRecord rec = open_record(mesh, e, source);
  refine_core(mesh, e, col, opt);
  close_record(mesh, rec, col);
  trace->records.push_back(std::move(rec));
}

int enforce_one(TMesh& mesh, int ev, RefineTrace* trace, const RefineOptions& opt) {
  int calls = 0;
  const int cap = 1 << 20;
  while (true) {
    auto edges = ev_disk_edges(mesh, ev);
    int lo = std::numeric_limits<int>::max(), hi = -1, pick = -1;
    for (int e : edges) {
      const EdgeRec& E = mesh.edge(e);
      hi = std::max(hi, E.level);
      if (pick < 0 || E.level < lo || (E.level == lo && E.di < mesh.edge(pick).di)) {
        lo = E.level;
        pick = e;
      }
    }
    if (pick < 0 || lo == hi) return calls;
    if (++calls > cap) throw std::runtime_error("enforce_ev_disk: no fixpoint");
    refine_recorded(mesh, pick, trace, "ev_disk", opt);
  }
}

void enforce_all(TMesh& mesh, RefineTrace* trace, const RefineOptions& opt) {
  auto evs = mesh.extraordinary_nodes();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v : evs)
      if (enforce_one(mesh, v, trace, opt) > 0) changed = true;
  }
}

void require_refinable(const TMesh& mesh, int e) {
  if (e < 0 || e >= mesh.num_edges()) throw std::out_of_range("unknown edge id " + std::to_string(e));
  if (!mesh.edge(e).active) throw std::logic_error("edge " + std::to_string(e) + " is inactive");
  if (!mesh.labeled()) throw std::logic_error("refine needs a direction labeling");
}

}  // namespace

double locality_constant(int p, int K) {
  if (K < 1) throw std::invalid_argument("K must be positive");
  double t = std::exp2(1.0 / K);
  return 0.5 + 2.0 * (p + 1) / (t * (t - 1.0));
}

int ev_disk_radius(int p) { return p + (p + 1) / 2; }

std::vector<int> ev_disk_edges(const TMesh& mesh, int ev) {
  std::vector<int> out;
  for (int q : k_disk(mesh, ev, ev_disk_radius(mesh.degree()))) {
    auto es = mesh.element_edges(q);
    out.insert(out.end(), es.begin(), es.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SubdivResult subdiv(TMesh& mesh, int e) { return mesh.subdiv(e); }

void refine(TMesh& mesh, int e, RefineTrace* trace, const RefineOptions& opt) {
  require_refinable(mesh, e);
  refine_recorded(mesh, e, trace, "mark", opt);
  if (opt.enforce_ev_disks) enforce_all(mesh, trace, opt);
}

RefineTrace refine_batch(TMesh& mesh, const std::vector<int>& marks, const RefineOptions& opt) {
  if (!mesh.labeled()) throw std::logic_error("refine needs a direction labeling");
  RefineTrace trace;
  trace.degree = mesh.degree();
  trace.initial_active_edges = mesh.count_active_edges();
  for (int m : marks) {
    if (m < 0 || m >= mesh.num_edges()) throw std::out_of_range("unknown edge id " + std::to_string(m));
    ++trace.marks;
    if (!mesh.edge(m).active) {
      TraceRecord rec = open_record(mesh, m, "mark");
      rec.absorbed = true;
      rec.active_edges_after = mesh.count_active_edges();
      trace.records.push_back(std::move(rec));
      continue;
    }
    refine(mesh, m, &trace, opt);
  }
  return trace;
}

int enforce_ev_disk(TMesh& mesh, int ev, RefineTrace* trace, const RefineOptions& opt) {
  if (ev < 0 || ev >= mesh.num_nodes() || !mesh.node(ev).extraordinary)
    throw std::invalid_argument("node " + std::to_string(ev) + " is not extraordinary");
  return enforce_one(mesh, ev, trace, opt);
}

// ---- serialization

namespace {

json point_json(const GridPoint& g) { return json::array({g.host, g.x, g.y}); }
GridPoint point_from(const json& j) {
  return {j.at(0).get<int32_t>(), j.at(1).get<int64_t>(), j.at(2).get<int64_t>()};
}
json dist_json(double d) {
  if (std::isinf(d)) return nullptr;
  return d;
}
double dist_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

json RefineTrace::to_json() const {
  json j;
  j["degree"] = degree;
  j["initial_active_edges"] = initial_active_edges;
  j["marks"] = marks;
  json recs = json::array();
  for (const auto& r : records) {
    json o;
    o["mark"] = r.mark;
    o["mark_level"] = r.mark_level;
    o["mark_di"] = r.mark_di;
    o["mark_mid"] = point_json(r.mark_mid);
    o["source"] = r.source;
    o["absorbed"] = r.absorbed;
    o["K"] = r.K;
    o["subdivided"] = r.subdivided;
    json ps = json::array();
    for (const auto& p : r.produced)
      ps.push_back({{"id", p.id},
                    {"level", p.level},
                    {"mid", point_json(p.mid)},
                    {"dist_lo", p.dist_lo},
                    {"dist_hi", dist_json(p.dist_hi)}});
    o["produced"] = ps;
    o["active_edges_after"] = r.active_edges_after;
    recs.push_back(o);
  }
  j["records"] = recs;
  return j;
}

RefineTrace RefineTrace::from_json(const json& j) {
  RefineTrace t;
  t.degree = j.at("degree").get<int>();
  t.initial_active_edges = j.at("initial_active_edges").get<int>();
  t.marks = j.at("marks").get<int>();
  for (const auto& o : j.at("records")) {
    TraceRecord r;
    r.mark = o.at("mark").get<int>();
    r.mark_level = o.at("mark_level").get<int>();
    r.mark_di = o.at("mark_di").get<std::vector<int>>();
    r.mark_mid = point_from(o.at("mark_mid"));
    r.source = o.at("source").get<std::string>();
    r.absorbed = o.at("absorbed").get<bool>();
    r.K = o.at("K").get<int>();
    r.subdivided = o.at("subdivided").get<std::vector<int>>();
    for (const auto& p : o.at("produced"))
      r.produced.push_back({p.at("id").get<int>(), p.at("level").get<int>(), point_from(p.at("mid")),
                            p.at("dist_lo").get<double>(), dist_from(p.at("dist_hi"))});
    r.active_edges_after = o.at("active_edges_after").get<int>();
    t.records.push_back(std::move(r));
  }
  return t;
}

}  // namespace tsp
