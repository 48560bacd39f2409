#include "tspline/basis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tspline/atlas.hpp"

namespace tsp {

namespace {

// Cox-de Boor on n knots (degree n-2).
double cox_de_boor(const double* k, int n, double x) {
  int p = n - 2;
  double last = k[n - 1];
  double N[64];
  for (int j = 0; j <= p; ++j) {
    bool in = k[j] <= x && x < k[j + 1];
    if (x == last && k[j] < k[j + 1] && k[j + 1] == last) in = true;
    N[j] = in ? 1.0 : 0.0;
  }
  for (int d = 1; d <= p; ++d)
    for (int j = 0; j + d <= p; ++j) {
      double v = 0;
      double l = k[j + d] - k[j], r = k[j + d + 1] - k[j + 1];
      if (l > 0) v += (x - k[j]) / l * N[j];
      if (r > 0) v += (k[j + d + 1] - x) / r * N[j + 1];
      N[j] = v;
    }
  return N[0];
}

double bspline_rec(const double* k, int n, double x, int deriv) {
  if (deriv == 0) return cox_de_boor(k, n, x);
  int p = n - 2;
  double v = 0;
  double l = k[n - 2] - k[0], r = k[n - 1] - k[1];
  if (l > 0) v += bspline_rec(k, n - 1, x, deriv - 1) / l;
  if (r > 0) v -= bspline_rec(k + 1, n - 1, x, deriv - 1) / r;
  return p * v;
}

std::array<int64_t, 4> placed_rect(const Placement& P, int64_t x0, int64_t y0, int64_t x1, int64_t y1) {
  auto a = P.apply(x0, y0), b = P.apply(x1, y1);
  return {std::min(a[0], b[0]), std::max(a[0], b[0]), std::min(a[1], b[1]), std::max(a[1], b[1])};
}

// Part of the chart box inside a placed host, in host coordinates.
std::optional<std::array<double, 4>> host_part(const Placement& P, const std::array<double, 4>& box) {
  auto sq = placed_rect(P, 0, 0, kScale, kScale);
  double x0 = std::max(double(sq[0]), box[0]), x1 = std::min(double(sq[1]), box[1]);
  double y0 = std::max(double(sq[2]), box[2]), y1 = std::min(double(sq[3]), box[3]);
  if (x0 >= x1 || y0 >= y1) return std::nullopt;
  auto a = P.unapply(x0, y0), b = P.unapply(x1, y1);
  return std::array<double, 4>{std::min(a[0], b[0]), std::max(a[0], b[0]), std::min(a[1], b[1]),
                               std::max(a[1], b[1])};
}

struct LineKnots {
  bool done = false;
  std::vector<int64_t> left, right;  // nearest first
};

// Element boundaries met by the line through the origin along `axis`.
LineKnots knots_on_line(const TMesh& mesh, const GridPoint& g, int axis, int64_t W, int m) {
  int64_t box[4] = {-1, 1, -1, 1};
  box[2 * axis] = -W;
  box[2 * axis + 1] = W;
  HostAtlas atlas(mesh.topo(), g, box[0], box[1], box[2], box[3]);
  if (!atlas.flat()) throw ChartError("layout around node is not a plain grid: " + atlas.problem());
  std::vector<int64_t> ks{0};
  int64_t cov_lo = INT64_MAX, cov_hi = INT64_MIN;
  std::vector<int> elems;
  for (auto& [h, P] : atlas.placements()) {
    auto win = atlas.host_window(h);
    if (!win) continue;
    auto sq = placed_rect(P, 0, 0, kScale, kScale);
    cov_lo = std::min(cov_lo, sq[2 * axis]);
    cov_hi = std::max(cov_hi, sq[2 * axis + 1]);
    elems.clear();
    mesh.elements_in_box(h, (*win)[0], (*win)[2], (*win)[1], (*win)[3], elems);
    for (int q : elems) {
      const auto& Q = mesh.element(q);
      auto r = placed_rect(P, Q.x0, Q.y0, Q.x1, Q.y1);
      int o = 1 - axis;
      if (r[2 * o] > 0 || r[2 * o + 1] < 0) continue;
      for (int64_t v : {r[2 * axis], r[2 * axis + 1]})
        if (v >= -W && v <= W) ks.push_back(v);
      if (r[2 * o] != 0 && r[2 * o + 1] != 0) continue;
      // nodes inside a side lying on the line count as crossings too
      const std::array<std::array<int64_t, 2>, 4> cs{
          {{Q.x0, Q.y0}, {Q.x1, Q.y0}, {Q.x1, Q.y1}, {Q.x0, Q.y1}}};
      for (int s = 0; s < 4; ++s) {
        if (Q.sides[s].size() < 2) continue;
        auto a = cs[s], b = cs[(s + 1) & 3];
        auto pa = P.apply(a[0], a[1]), pb = P.apply(b[0], b[1]);
        if (pa[o] != 0 || pb[o] != 0) continue;
        int64_t dx = (b[0] > a[0]) - (b[0] < a[0]), dy = (b[1] > a[1]) - (b[1] < a[1]);
        int64_t run = 0;
        for (size_t i = 0; i + 1 < Q.sides[s].size(); ++i) {
          const auto& E = mesh.edge(Q.sides[s][i]);
          run += std::abs(E.x1 - E.x0) + std::abs(E.y1 - E.y0);
          auto pn = P.apply(a[0] + dx * run, a[1] + dy * run);
          if (pn[axis] >= -W && pn[axis] <= W) ks.push_back(pn[axis]);
        }
      }
    }
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  LineKnots out;
  for (auto it = ks.rbegin(); it != ks.rend(); ++it)
    if (*it < 0) out.left.push_back(*it);
  for (int64_t v : ks)
    if (v > 0) out.right.push_back(v);
  bool end_lo = cov_lo > -W, end_hi = cov_hi < W;  // domain boundary inside the box
  // continue past the boundary with the interval next to it
  auto extend = [&](std::vector<int64_t>& side, std::vector<int64_t>& other, int sign) {
    if (int(side.size()) >= m) return true;
    int64_t last_gap;
    if (side.size() >= 2)
      last_gap = std::abs(side[side.size() - 1] - side[side.size() - 2]);
    else if (side.size() == 1)
      last_gap = std::abs(side[0]);
    else if (!other.empty())
      last_gap = std::abs(other[0]);
    else
      return false;
    int64_t at = side.empty() ? 0 : side.back();
    while (int(side.size()) < m) {
      at += sign * last_gap;
      side.push_back(at);
    }
    return true;
  };
  bool ok_l = int(out.left.size()) >= m, ok_r = int(out.right.size()) >= m;
  if (!ok_l && end_lo) ok_l = extend(out.left, out.right, -1);
  if (!ok_r && end_hi) ok_r = extend(out.right, out.left, +1);
  out.done = ok_l && ok_r;
  out.left.resize(std::min<size_t>(out.left.size(), m));
  out.right.resize(std::min<size_t>(out.right.size(), m));
  return out;
}

}  // namespace

double bspline_eval(const std::vector<double>& knots, double x, int deriv) {
  int n = int(knots.size());
  if (n < 3 || n > 60) throw std::invalid_argument("need between 3 and 60 knots");
  for (int i = 1; i < n; ++i)
    if (knots[i] < knots[i - 1]) throw std::invalid_argument("knots must be nondecreasing");
  if (deriv < 0 || deriv > n - 2) throw std::invalid_argument("derivative order exceeds degree");
  if (x < knots.front() || x > knots.back()) return 0.0;
  return bspline_rec(knots.data(), n, x, deriv);
}

HostPoint element_point(const TMesh& mesh, int element, double u, double v) {
  const auto& Q = mesh.element(element);
  return {Q.host, double(Q.x0) + u * double(Q.x1 - Q.x0), double(Q.y0) + v * double(Q.y1 - Q.y0)};
}

std::optional<std::array<double, 2>> Chart::to_chart(const HostPoint& q) const {
  auto f = placements.find(q.host);
  if (f == placements.end()) return std::nullopt;
  auto c = f->second.apply(q.x, q.y);
  return std::array<double, 2>{c[0] / double(kScale), c[1] / double(kScale)};
}

Chart build_chart(const TMesh& mesh, int anchor) {
  const auto& N = mesh.node(anchor);
  if (N.elems.empty()) throw ChartError("node " + std::to_string(anchor) + " is not active");
  int p = mesh.degree(), m = (p + 1) / 2;
  int64_t shortest = INT64_MAX;
  for (int e : N.edges) {
    const auto& E = mesh.edge(e);
    shortest = std::min(shortest, std::abs(E.x1 - E.x0) + std::abs(E.y1 - E.y0));
  }
  Chart c;
  c.anchor = anchor;
  std::array<std::vector<int64_t>, 2> kv;
  for (int axis = 0; axis < 2; ++axis) {
    int64_t W = shortest * m;
    for (;;) {
      auto lk = knots_on_line(mesh, N.pos, axis, W, m);
      if (lk.done) {
        kv[axis].assign(lk.left.rbegin(), lk.left.rend());
        kv[axis].push_back(0);
        kv[axis].insert(kv[axis].end(), lk.right.begin(), lk.right.end());
        break;
      }
      if (W > 64 * kScale) throw ChartError("no knots found around node " + std::to_string(anchor));
      W *= 2;
    }
  }
  HostAtlas atlas(mesh.topo(), N.pos, kv[0].front(), kv[0].back(), kv[1].front(), kv[1].back());
  if (!atlas.flat())
    throw ChartError("support of node " + std::to_string(anchor) + " is not a plain grid: " + atlas.problem());
  c.placements = atlas.placements();
  for (int64_t v : kv[0]) c.kv_u.push_back(double(v) / double(kScale));
  for (int64_t v : kv[1]) c.kv_v.push_back(double(v) / double(kScale));
  c.box = {c.kv_u.front(), c.kv_u.back(), c.kv_v.front(), c.kv_v.back()};
  return c;
}

const Chart& ChartCache::get(const TMesh& mesh, int anchor) {
  auto key = std::make_pair(anchor, mesh.revision());
  auto f = charts_.find(key);
  if (f != charts_.end()) return f->second;
  return charts_.emplace(key, build_chart(mesh, anchor)).first->second;
}

std::vector<std::vector<int>> ev_anchor_indices(int dims, int r, bool wrap) {
  std::set<std::vector<int>> s;
  int planes = wrap ? dims : dims - 1;
  for (int j = 0; j < planes; ++j)
    for (int a = -r; a <= r; ++a)
      for (int b = -r; b <= r; ++b) {
        std::vector<int> v(dims, -r);
        v[j] = a;
        v[(j + 1) % dims] = b;
        s.insert(v);
      }
  return {s.begin(), s.end()};
}

double ev_trace_eval(const std::vector<int>& index, int p, const std::vector<double>& x) {
  std::vector<double> knots(p + 2);
  double v = 1;
  for (size_t d = 0; d < index.size() && v != 0; ++d) {
    for (int t = 0; t <= p + 1; ++t) knots[t] = index[d] - (p + 1) / 2 + t;
    v *= bspline_eval(knots, x[d]);
  }
  return v;
}

Embedding build_ev_embedding(const TMesh& mesh, int ev) {
  const auto& N = mesh.node(ev);
  if (!N.extraordinary) throw EmbeddingError("node " + std::to_string(ev) + " is not extraordinary");
  int p = mesh.degree();
  Embedding em;
  em.ev = ev;
  em.degree = p;
  em.valence = int(N.elems.size());
  em.boundary = N.boundary;
  em.dims = em.boundary ? em.valence + 1 : em.valence;
  // the p-disk must be one uniform grid
  auto disk = k_disk(mesh, ev, p);
  int64_t h = -1;
  for (int q : disk) {
    const auto& Q = mesh.element(q);
    int64_t w = Q.x1 - Q.x0, t = Q.y1 - Q.y0;
    if (h < 0) h = w;
    if (w != h || t != h)
      throw EmbeddingError("p-disk of node " + std::to_string(ev) + " is not uniform (element " +
                           std::to_string(q) + ")");
  }
  em.cell = h;
  em.level = kDepth - int(std::log2(double(h)) + 0.5);
  const auto& topo = mesh.topo();
  std::vector<Embedding::Sector> raw;
  for (int q : N.elems) {
    const auto& Q = mesh.element(q);
    auto at = topo.in_host(N.pos, Q.host);
    if (!at) throw EmbeddingError("node not found in host of element " + std::to_string(q));
    int c = -1;
    const std::array<std::array<int64_t, 2>, 4> corners{
        {{Q.x0, Q.y0}, {Q.x1, Q.y0}, {Q.x1, Q.y1}, {Q.x0, Q.y1}}};
    for (int k = 0; k < 4; ++k)
      if (corners[k][0] == at->x && corners[k][1] == at->y) c = k;
    if (c < 0) throw EmbeddingError("node is not a corner of element " + std::to_string(q));
    HostAtlas atlas(topo, *at, 0, p * h, 0, p * h, (4 - c) & 3);
    if (!atlas.flat())
      throw EmbeddingError("sector of element " + std::to_string(q) + " is not a plain grid: " + atlas.problem());
    Embedding::Sector s;
    s.element = q;
    s.a_spoke = Q.sides[c].front();
    s.b_spoke = Q.sides[(c + 3) & 3].back();
    s.placements = atlas.placements();
    raw.push_back(std::move(s));
  }
  // counterclockwise chain: the second axis of one sector is the first
  // axis of the next
  int start = -1;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (em.boundary) {
      if (mesh.edge(raw[i].a_spoke).boundary) start = int(i);
    } else if (start < 0 || raw[i].a_spoke < raw[start].a_spoke) {
      start = int(i);
    }
  }
  if (start < 0) throw EmbeddingError("no boundary spoke at node " + std::to_string(ev));
  std::vector<bool> used(raw.size(), false);
  for (int cur = start; cur >= 0 && !used[cur];) {
    used[cur] = true;
    em.sectors.push_back(raw[cur]);
    int next = -1;
    for (size_t i = 0; i < raw.size(); ++i)
      if (raw[i].a_spoke == raw[cur].b_spoke) next = int(i);
    cur = next;
  }
  if (em.sectors.size() != raw.size())
    throw EmbeddingError("sectors around node " + std::to_string(ev) + " do not form a chain");
  em.anchors = ev_anchor_indices(em.dims, (p - 1) / 2, !em.boundary);
  return em;
}

std::optional<std::vector<double>> Embedding::embed(const HostPoint& q) const {
  double W = double(degree) * double(cell);
  for (size_t s = 0; s < sectors.size(); ++s) {
    auto f = sectors[s].placements.find(q.host);
    if (f == sectors[s].placements.end()) continue;
    auto c = f->second.apply(q.x, q.y);
    if (c[0] < 0 || c[1] < 0 || c[0] > W || c[1] > W) continue;
    std::vector<double> x(dims, 0.0);
    x[s] = c[0] / double(cell);
    x[(s + 1) % dims] = c[1] / double(cell);
    return x;
  }
  return std::nullopt;
}

double Basis::eval(size_t i, const HostPoint& q) const {
  const auto& f = fns[i];
  if (f.kind == BasisFn::Kind::Structured) {
    const auto& c = charts[f.chart];
    auto xy = c.to_chart(q);
    if (!xy) return 0.0;
    return bspline_eval(c.kv_u, (*xy)[0]) * bspline_eval(c.kv_v, (*xy)[1]);
  }
  const auto& em = embeddings[f.embedding];
  auto x = em.embed(q);
  if (!x) return 0.0;
  return ev_trace_eval(f.index, degree, *x);
}

void Basis::candidates(const HostPoint& q, std::vector<int>& out) const {
  out.clear();
  auto f = by_host_.find(q.host);
  if (f == by_host_.end()) return;
  for (const auto& w : f->second)
    if (q.x >= w.x0 && q.x <= w.x1 && q.y >= w.y0 && q.y <= w.y1) out.push_back(w.fn);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

void Basis::build_index() {
  by_host_.clear();
  for (size_t i = 0; i < fns.size(); ++i) {
    const auto& f = fns[i];
    if (f.kind == BasisFn::Kind::Structured) {
      const auto& c = charts[f.chart];
      std::array<double, 4> box{c.box[0] * kScale, c.box[1] * kScale, c.box[2] * kScale,
                                c.box[3] * kScale};
      for (auto& [h, P] : c.placements)
        if (auto part = host_part(P, box))
          by_host_[h].push_back({int(i), (*part)[0], (*part)[1], (*part)[2], (*part)[3]});
    } else {
      const auto& em = embeddings[f.embedding];
      double W = double(em.degree) * double(em.cell);
      for (auto& s : em.sectors)
        for (auto& [h, P] : s.placements)
          if (auto part = host_part(P, {0, W, 0, W}))
            by_host_[h].push_back({int(i), (*part)[0], (*part)[1], (*part)[2], (*part)[3]});
    }
  }
}

std::vector<int> structured_anchors(const TMesh& mesh) {
  int half = (mesh.degree() + 1) / 2;
  std::vector<char> excluded(mesh.num_nodes(), 0);
  // inside the disk means both sector coordinates below `half` elements;
  // for boundary nodes this differs from "all elements in the disk"
  for (int v : mesh.extraordinary_nodes()) {
    Embedding em = build_ev_embedding(mesh, v);
    for (int q : k_disk(mesh, v, half))
      for (int n : mesh.element_nodes(q)) {
        const auto& g = mesh.node(n).pos;
        std::vector<GridPoint> reps;
        mesh.topo().representations(g, reps);
        for (const auto& r : reps) {
          auto x = em.embed({r.host, double(r.x), double(r.y)});
          if (!x) continue;
          double big = *std::max_element(x->begin(), x->end());
          if (big < half - 1e-9) excluded[n] = 1;
          break;
        }
      }
  }
  std::vector<int> out;
  for (const auto& n : mesh.nodes())
    if (!n.elems.empty() && !excluded[n.id]) out.push_back(n.id);
  return out;
}

Basis assemble_basis(const TMesh& mesh, ChartCache* cache) {
  Basis b;
  b.degree = mesh.degree();
  for (int n : structured_anchors(mesh)) {
    BasisFn f;
    f.kind = BasisFn::Kind::Structured;
    f.anchor = n;
    f.chart = int(b.charts.size());
    b.charts.push_back(cache ? cache->get(mesh, n) : build_chart(mesh, n));
    b.fns.push_back(std::move(f));
  }
  for (int v : mesh.extraordinary_nodes()) {
    int idx = int(b.embeddings.size());
    b.embeddings.push_back(build_ev_embedding(mesh, v));
    for (const auto& a : b.embeddings.back().anchors) {
      BasisFn f;
      f.kind = BasisFn::Kind::EVTrace;
      f.anchor = v;
      f.embedding = idx;
      f.index = a;
      b.fns.push_back(std::move(f));
    }
  }
  b.build_index();
  return b;
}

}  // namespace tsp
