#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "tspline/bezier.hpp"
#include "tspline/verify.hpp"

namespace tsp {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Column of each function id, -1 when not selected.
std::vector<int> column_map(const Basis& basis, const std::vector<int>& fns) {
  std::vector<int> col(basis.size(), -1);
  if (fns.empty()) {
    std::iota(col.begin(), col.end(), 0);
  } else {
    for (size_t j = 0; j < fns.size(); ++j) col.at(fns[j]) = int(j);
  }
  return col;
}

void element_rows(const TMesh& bezier, const Basis& basis, const std::vector<int>& col, int q,
                  int row0, std::vector<int>& cand, Triplets& out) {
  int n = bezier.degree() + 1;
  int row = row0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++row) {
      HostPoint hp = element_point(bezier, q, (i + 0.5) / n, (j + 0.5) / n);
      basis.candidates(hp, cand);
      for (int f : cand) {
        if (col[f] < 0) continue;
        double v = basis.eval(f, hp);
        if (v != 0) out.emplace_back(row, col[f], v);
      }
    }
}

// Morton order inside each host keeps neighboring elements on nearby rows.
std::vector<int> spatial_order(const TMesh& mesh) {
  auto spread = [](uint64_t v) {
    v &= 0xFFFFFFFFull;
    v = (v | (v << 16)) & 0x0000FFFF0000FFFFull;
    v = (v | (v << 8)) & 0x00FF00FF00FF00FFull;
    v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0Full;
    v = (v | (v << 2)) & 0x3333333333333333ull;
    v = (v | (v << 1)) & 0x5555555555555555ull;
    return v;
  };
  std::vector<std::pair<std::pair<int, uint64_t>, int>> keyed;
  for (int q : mesh.active_elements()) {
    const auto& Q = mesh.element(q);
    uint64_t key = spread(uint64_t(Q.x0) >> (kDepth - 32)) | (spread(uint64_t(Q.y0) >> (kDepth - 32)) << 1);
    keyed.push_back({{Q.host, key}, q});
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  for (auto& k : keyed) out.push_back(k.second);
  return out;
}

Eigen::SparseMatrix<double> finish(const TMesh& bezier, size_t elems, int cols,
                                   const Triplets& t) {
  int n = bezier.degree() + 1;
  Eigen::SparseMatrix<double> m(int(elems) * n * n, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

Eigen::SparseMatrix<double> collocation_matrix_serial(const TMesh& bezier, const Basis& basis,
                                                      const std::vector<int>& fns) {
  auto col = column_map(basis, fns);
  int cols = fns.empty() ? int(basis.size()) : int(fns.size());
  auto elems = spatial_order(bezier);
  int n = bezier.degree() + 1;
  Triplets t;
  std::vector<int> cand;
  for (size_t k = 0; k < elems.size(); ++k)
    element_rows(bezier, basis, col, elems[k], int(k) * n * n, cand, t);
  return finish(bezier, elems.size(), cols, t);
}

Eigen::SparseMatrix<double> collocation_matrix(const TMesh& bezier, const Basis& basis,
                                               const std::vector<int>& fns) {
  auto col = column_map(basis, fns);
  int cols = fns.empty() ? int(basis.size()) : int(fns.size());
  auto elems = spatial_order(bezier);
  int n = bezier.degree() + 1;
  std::vector<Triplets> parts(elems.size());
#pragma omp parallel
  {
    std::vector<int> cand;
#pragma omp for schedule(dynamic, 16)
    for (long k = 0; k < long(elems.size()); ++k)
      element_rows(bezier, basis, col, elems[k], int(k) * n * n, cand, parts[k]);
  }
  Triplets t;
  for (auto& p : parts) t.insert(t.end(), p.begin(), p.end());
  return finish(bezier, elems.size(), cols, t);
}

namespace {

// Rows of C reduced by orthogonal transformations, eliminating each column
// as soon as every row touching it has been seen. Leaves are consecutive
// row chunks; a node owns a range of leaves.
// Rank of a sparse matrix by nested block elimination. Rows are cut into
// chunks (leaves); a column is interior to a range of leaves when all its
// rows lie there. Each front takes a column-pivoted QR of its interior
// columns, keeps the pivots above the threshold, and passes the rest of the
// rows, restricted to the shared columns, to its parent. Interior columns
// appear in no other rows, so the rank is the sum of the kept pivots.
class FrontalReducer {
 public:
  FrontalReducer(const Eigen::SparseMatrix<double, Eigen::RowMajor>& c, int chunk, double threshold)
      : c_(c), chunk_(chunk), threshold_(threshold) {
    leaves_ = int((c.rows() + chunk - 1) / chunk);
    first_.assign(c.cols(), -1);
    last_.assign(c.cols(), -1);
    for (int r = 0; r < c.rows(); ++r)
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(c, r); it; ++it) {
        int j = int(it.col()), leaf = r / chunk;
        if (first_[j] < 0) first_[j] = leaf;
        last_[j] = leaf;
      }
  }

  int rank = 0;
  double max_pivot = 0;
  double min_kept = std::numeric_limits<double>::infinity();
  int fronts = 0;

  void run() {
    if (leaves_ > 0) reduce(0, leaves_ - 1);
  }

 private:
  struct Front {
    std::vector<int> cols;
    Eigen::MatrixXd rows;  // one row per pending equation
  };

  Front reduce(int a, int b) {
    std::vector<const Front*> parts;
    Front left, right, leaf;
    if (a == b) {
      int r0 = a * chunk_, r1 = std::min<int>(int(c_.rows()), r0 + chunk_);
      for (int r = r0; r < r1; ++r)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(c_, r); it; ++it)
          leaf.cols.push_back(int(it.col()));
      std::sort(leaf.cols.begin(), leaf.cols.end());
      leaf.cols.erase(std::unique(leaf.cols.begin(), leaf.cols.end()), leaf.cols.end());
      leaf.rows = Eigen::MatrixXd::Zero(r1 - r0, leaf.cols.size());
      for (int r = r0; r < r1; ++r)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(c_, r); it; ++it) {
          auto k = std::lower_bound(leaf.cols.begin(), leaf.cols.end(), int(it.col())) - leaf.cols.begin();
          leaf.rows(r - r0, k) = it.value();
        }
      parts.push_back(&leaf);
    } else {
      int m = (a + b) / 2;
      left = reduce(a, m);
      right = reduce(m + 1, b);
      parts = {&left, &right};
    }
    ++fronts;
    // interior columns first, then those still shared with other leaves
    std::vector<int> cols;
    for (auto* f : parts) cols.insert(cols.end(), f->cols.begin(), f->cols.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    auto interior = [&](int j) { return first_[j] >= a && last_[j] <= b; };
    std::stable_partition(cols.begin(), cols.end(), interior);
    int k = int(std::count_if(cols.begin(), cols.end(), interior));
    std::unordered_map<int, int> where;
    for (size_t i = 0; i < cols.size(); ++i) where[cols[i]] = int(i);
    int nr = 0;
    for (auto* f : parts) nr += int(f->rows.rows());
    int nc = int(cols.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nr, nc);
    int at = 0;
    for (auto* f : parts) {
      for (size_t j = 0; j < f->cols.size(); ++j)
        m.col(where[f->cols[j]]).segment(at, f->rows.rows()) = f->rows.col(j);
      at += int(f->rows.rows());
    }

    int kept = 0;
    if (k > 0 && nr > 0) {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m.leftCols(k));
      int top = std::min(nr, k);
      const auto& r = qr.matrixQR();
      for (int i = 0; i < top; ++i) {
        double piv = std::abs(r(i, i));
        max_pivot = std::max(max_pivot, piv);
        if (piv > threshold_) {
          ++kept;
          min_kept = std::min(min_kept, piv);
        } else {
          break;  // pivots do not increase
        }
      }
      if (nc > k) m.rightCols(nc - k).applyOnTheLeft(qr.householderQ().adjoint());
    }
    rank += kept;

    // The rows below the kept pivots carry on with the shared columns only;
    // their interior part is below the threshold and dropped.
    Front out;
    out.cols.assign(cols.begin() + k, cols.end());
    int nb = nc - k, pending = nr - kept;
    Eigen::MatrixXd t = m.bottomRightCorner(pending, nb);
    if (pending > nb && nb > 0) {
      Eigen::HouseholderQR<Eigen::Ref<Eigen::MatrixXd>> qr(t);  // R in place
      out.rows = t.topRows(nb).triangularView<Eigen::Upper>();
    } else {
      out.rows = nb > 0 ? t : Eigen::MatrixXd(0, 0);
    }
    return out;
  }

  const Eigen::SparseMatrix<double, Eigen::RowMajor>& c_;
  int chunk_;
  double threshold_;
  int leaves_ = 0;
  std::vector<int> first_, last_;
};

}  // namespace

RankResult numerical_rank(const Eigen::SparseMatrix<double>& input, double tol) {
  RankResult r;
  r.cols = int(input.cols());
  r.method = "rank-revealing frontal QR";
  if (input.cols() == 0) return r;
  // Unit columns: the largest pivot of a column-pivoted QR is then 1, so the
  // relative threshold is tol itself.
  Eigen::SparseMatrix<double> m = input;
  for (int j = 0; j < m.outerSize(); ++j) {
    double s = 0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it) s += it.value() * it.value();
    if (s == 0) continue;
    s = 1.0 / std::sqrt(s);
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it) it.valueRef() *= s;
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> rm = m;
  FrontalReducer red(rm, 64, tol);
  red.run();
  r.rank = red.rank;
  r.fronts = red.fronts;
  r.max_pivot = red.max_pivot;
  r.min_pivot = red.rank > 0 ? red.min_kept : 0;
  return r;
}

CheckReport check_linear_independence(const TMesh& bezier, const Basis& basis,
                                      const LinearIndependenceOptions& opt) {
  CheckReport rep;
  rep.check = "linear_independence";
  auto c = collocation_matrix(bezier, basis, opt.subset);
  if (c.rows() < c.cols())
    throw std::invalid_argument("collocation: " + std::to_string(c.rows()) + " points for " +
                                std::to_string(c.cols()) + " functions");
  auto r = numerical_rank(c, opt.tol);
  rep.info["functions"] = r.cols;
  rep.info["points"] = c.rows();
  rep.info["rank"] = r.rank;
  rep.info["method"] = r.method;
  rep.info["max_pivot"] = r.max_pivot;
  rep.info["min_pivot"] = r.min_pivot;
  if (r.rank != r.cols)
    rep.violations.push_back({{"rank", r.rank},
                              {"functions", r.cols},
                              {"inequality", std::to_string(r.rank) + " < " + std::to_string(r.cols)}});
  return rep;
}

std::vector<int> reproduction_eligible(const TMesh& mesh) {
  std::vector<int> seeds;
  for (const auto& n : mesh.nodes())
    if (n.boundary && !n.elems.empty()) seeds.push_back(n.id);
  for (int v : mesh.extraordinary_nodes()) seeds.push_back(v);
  auto bad = k_disk_multi(mesh, seeds, mesh.degree());
  std::vector<int> out;
  for (int q : mesh.active_elements())
    if (!std::binary_search(bad.begin(), bad.end(), q)) out.push_back(q);
  return out;
}

CheckReport check_poly_reproduction(const TMesh& mesh, const Basis& basis, int element,
                                    double tol) {
  auto ok = reproduction_eligible(mesh);
  if (!std::binary_search(ok.begin(), ok.end(), element))
    throw std::invalid_argument("element " + std::to_string(element) +
                                " lies in the p-disk of a boundary or extraordinary node");
  CheckReport rep;
  rep.check = "poly_reproduction";
  int p = mesh.degree(), n = p + 2;
  std::vector<HostPoint> pts;
  std::vector<std::array<double, 2>> uv;
  std::vector<int> fns, cand;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double u = (i + 0.5) / n, v = (j + 0.5) / n;
      pts.push_back(element_point(mesh, element, u, v));
      uv.push_back({u, v});
      basis.candidates(pts.back(), cand);
      fns.insert(fns.end(), cand.begin(), cand.end());
    }
  std::sort(fns.begin(), fns.end());
  fns.erase(std::unique(fns.begin(), fns.end()), fns.end());
  Eigen::MatrixXd a(pts.size(), fns.size());
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = 0; j < fns.size(); ++j) a(i, j) = basis.eval(fns[j], pts[i]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  double worst = 0;
  for (int ea = 0; ea <= p; ++ea)
    for (int eb = 0; eb <= p; ++eb) {
      Eigen::VectorXd f(pts.size());
      for (size_t i = 0; i < pts.size(); ++i) f[i] = std::pow(uv[i][0], ea) * std::pow(uv[i][1], eb);
      Eigen::VectorXd c = qr.solve(f);
      double res = (a * c - f).cwiseAbs().maxCoeff();
      worst = std::max(worst, res);
      if (!(res < tol))
        rep.violations.push_back({{"element", element},
                                  {"monomial", {ea, eb}},
                                  {"inequality", std::to_string(res) + " >= " + std::to_string(tol)}});
    }
  rep.info["element"] = element;
  rep.info["functions"] = fns.size();
  rep.info["max_residual"] = worst;
  return rep;
}

CheckReport check_poly_reproduction_sample(const TMesh& mesh, const Basis& basis, int count,
                                           uint64_t seed, double tol) {
  CheckReport rep;
  rep.check = "poly_reproduction";
  auto ok = reproduction_eligible(mesh);
  std::mt19937_64 rng(seed);
  std::shuffle(ok.begin(), ok.end(), rng);
  if (int(ok.size()) > count) ok.resize(count);
  std::sort(ok.begin(), ok.end());
  double worst = 0;
  for (int q : ok) {
    auto r = check_poly_reproduction(mesh, basis, q, tol);
    worst = std::max(worst, r.info["max_residual"].get<double>());
    rep.violations.insert(rep.violations.end(), r.violations.begin(), r.violations.end());
  }
  rep.info["elements"] = ok;
  rep.info["max_residual"] = worst;
  return rep;
}

namespace {

struct SideSamples {
  std::vector<HostPoint> pts;
  std::vector<double> s;  // signed distance from the edge in units of h
};

// Points on the normal through (px, py) into element q, in q's host.
SideSamples normal_samples(const TMesh& b, int q, const GridPoint& at, const GridPoint& other,
                           int count, double sign, double& depth) {
  const auto& Q = b.element(q);
  auto pa = b.topo().in_host(at, Q.host);
  auto pb = b.topo().in_host(other, Q.host);
  if (!pa || !pb) throw std::logic_error("smoothness: edge point outside element host");
  int dx = 0, dy = 0;
  if (pa->x == pb->x) {
    dx = pa->x == Q.x0 ? 1 : -1;
    depth = double(Q.x1 - Q.x0);
  } else {
    dy = pa->y == Q.y0 ? 1 : -1;
    depth = double(Q.y1 - Q.y0);
  }
  SideSamples out;
  for (int j = 0; j < count; ++j) {
    double d = depth * (j + 1) / (count + 1);
    out.pts.push_back({Q.host, double(pa->x) + dx * d, double(pa->y) + dy * d});
    out.s.push_back(sign * d);
  }
  return out;
}

// Scaled derivatives at 0 of the interpolating polynomial.
Eigen::VectorXd derivs_at_zero(const std::vector<double>& s, const std::vector<double>& f) {
  int n = int(s.size());
  Eigen::MatrixXd v(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) v(i, k) = std::pow(s[i], k);
    rhs[i] = f[i];
  }
  Eigen::VectorXd c = v.colPivHouseholderQr().solve(rhs);
  double fact = 1;
  for (int k = 0; k < n; ++k) {
    if (k > 0) fact *= k;
    c[k] *= fact;
  }
  return c;
}

}  // namespace

CheckReport check_smoothness(const TMesh& bezier, const Basis& basis,
                             const SmoothnessOptions& opt) {
  CheckReport rep;
  rep.check = "smoothness";
  int p = bezier.degree();
  auto kmap = continuity_map(bezier, bezier.extraordinary_nodes());
  std::vector<int> interior;
  for (int e : bezier.active_edges())
    if (bezier.edge(e).elems.size() == 2) interior.push_back(e);
  std::mt19937_64 rng(opt.seed);
  std::shuffle(interior.begin(), interior.end(), rng);
  if (int(interior.size()) > opt.samples) interior.resize(opt.samples);
  std::sort(interior.begin(), interior.end());

  std::uniform_int_distribution<int> frac(1, 15);
  double worst_value = 0, worst_deriv = 0;
  int c0 = 0;
  std::vector<int> cand, fns;
  for (int e : interior) {
    const auto& E = bezier.edge(e);
    // A dyadic point inside the edge, so it maps exactly between hosts.
    int k = frac(rng);
    GridPoint at{E.host, E.x0 + (E.x1 - E.x0) / 16 * k, E.y0 + (E.y1 - E.y0) / 16 * k};
    GridPoint end{E.host, E.x1, E.y1};
    if (at == end) end = GridPoint{E.host, E.x0, E.y0};
    double d0 = 0, d1 = 0;
    auto s0 = normal_samples(bezier, E.elems[0], at, end, p + 1, -1, d0);
    auto s1 = normal_samples(bezier, E.elems[1], at, end, p + 1, 1, d1);
    double h = std::min(d0, d1);
    for (auto& v : s0.s) v /= h;
    for (auto& v : s1.s) v /= h;

    fns.clear();
    for (const auto* side : {&s0, &s1})
      for (const auto& hp : side->pts) {
        basis.candidates(hp, cand);
        fns.insert(fns.end(), cand.begin(), cand.end());
      }
    std::sort(fns.begin(), fns.end());
    fns.erase(std::unique(fns.begin(), fns.end()), fns.end());

    int kt = kmap.at(e);
    if (kt == 0) ++c0;
    double tol = kt == 0 ? opt.value_tol : opt.deriv_tol;
    for (int f : fns) {
      std::vector<double> f0, f1;
      for (const auto& hp : s0.pts) f0.push_back(basis.eval(f, hp));
      for (const auto& hp : s1.pts) f1.push_back(basis.eval(f, hp));
      auto g0 = derivs_at_zero(s0.s, f0), g1 = derivs_at_zero(s1.s, f1);
      for (int m = 0; m <= kt; ++m) {
        double diff = std::abs(g0[m] - g1[m]);
        (m == 0 ? worst_value : worst_deriv) = std::max(m == 0 ? worst_value : worst_deriv, diff);
        if (!(diff <= tol))
          rep.violations.push_back(
              {{"edge", e},
               {"function", f},
               {"order", m},
               {"continuity", kt},
               {"inequality", "|jump| = " + std::to_string(diff) + " > " + std::to_string(tol)}});
      }
    }
  }
  rep.info["edges"] = interior.size();
  rep.info["c0_edges"] = c0;
  rep.info["max_value_jump"] = worst_value;
  rep.info["max_derivative_jump"] = worst_deriv;
  return rep;
}

}  // namespace tsp
