#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "tspline/basis.hpp"
#include "tspline/bezier.hpp"
#include "tspline/meshgen.hpp"
#include "tspline/verify.hpp"

using namespace tsp;

namespace {

// Brute force count of multi-indices in [-r, r]^k whose entries other than -r
// sit in at most two cyclically adjacent positions.
int count_ev_indices(int k, int r) {
  int n = 2 * r + 1, total = 1, hits = 0;
  for (int i = 0; i < k; ++i) total *= n;
  for (int code = 0; code < total; ++code) {
    std::vector<int> free;
    for (int i = 0, c = code; i < k; ++i, c /= n)
      if (c % n != 0) free.push_back(i);
    bool ok = free.size() <= 1 ||
              (free.size() == 2 && (free[1] - free[0] == 1 || (free[0] == 0 && free[1] == k - 1)));
    hits += ok;
  }
  return hits;
}

int ev_trace_count(const Basis& b) {
  int n = 0;
  for (const auto& f : b.fns) n += f.kind == BasisFn::Kind::EVTrace;
  return n;
}

TMesh regular_star(int k, int p) {
  TMesh m = TMesh::from_initial(star_document(k, p == 1 ? 3 : 5, p));
  ensure_labels(m);
  return m;
}

// Sum of f * B over all candidate functions at a render point of element q.
double combine(const TMesh& m, const Basis& b, int q, double u, double v,
               const std::function<double(int)>& coef) {
  auto hp = element_point(m, q, u, v);
  std::vector<int> cand;
  b.candidates(hp, cand);
  double s = 0;
  for (int f : cand) s += coef(f) * b.eval(f, hp);
  return s;
}

}  // namespace

TEST_CASE("EV anchor index sets have kp(p-1)+1 elements") {
  for (int p : {1, 3, 5})
    for (int k = 3; k <= 6; ++k) {
      int r = (p - 1) / 2;
      int n = int(ev_anchor_indices(k, r, true).size());
      CHECK(n == k * p * (p - 1) + 1);
      CHECK(n == count_ev_indices(k, r));
    }
  CHECK(ev_anchor_indices(5, 1, true).size() == 31);
  CHECK(ev_anchor_indices(3, 1, true).size() == 19);
  CHECK(ev_anchor_indices(5, 0, true).size() == 1);
}

TEST_CASE("EV trace functions of assembled stars are linearly independent") {
  struct Case {
    int k, p, count;
  };
  for (Case c : {Case{3, 1, 1}, Case{5, 1, 1}, Case{6, 1, 1}, Case{5, 3, 31}, Case{3, 3, 19}}) {
    CAPTURE(c.k);
    CAPTURE(c.p);
    TMesh m = regular_star(c.k, c.p);
    Basis b = assemble_basis(m);
    CHECK(ev_trace_count(b) == c.count);
    LinearIndependenceOptions opt;
    for (int i = 0; i < int(b.size()); ++i)
      if (b.fns[i].kind == BasisFn::Kind::EVTrace) opt.subset.push_back(i);
    auto r = check_linear_independence(bezier_mesh(m), b, opt);
    CHECK(r.info["rank"].get<int>() == c.count);
  }
}

TEST_CASE("boundary extraordinary nodes get k(p-1)^2 + (k+1)(p-1) + 1 functions") {
  for (int p : {1, 3}) {
    TMesh m = TMesh::from_initial(ring_document(p));
    for (int i = 0; i < 3 && !validate_regular(m).ok(); ++i) m = uniform_refine_rebase(m);
    ensure_labels(m);
    Basis b = assemble_basis(m);
    REQUIRE(b.embeddings.size() == 5);
    for (const auto& e : b.embeddings) {
      CHECK(e.boundary);
      int k = e.valence;
      CHECK(int(e.anchors.size()) == k * (p - 1) * (p - 1) + (k + 1) * (p - 1) + 1);
    }
  }
}

TEST_CASE("grid basis has one function per node") {
  for (int p : {1, 3}) {
    TMesh m = TMesh::from_initial(grid_document(5, 4, p));
    ensure_labels(m);
    CHECK(assemble_basis(m).size() == 6 * 5);
  }
}

TEST_CASE("p=1 grid basis is the bilinear hat basis") {
  TMesh m = TMesh::from_initial(grid_document(4, 4, 1));
  ensure_labels(m);
  Basis b = assemble_basis(m);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    int q = m.active_elements()[rng() % 16];
    double u = gen::uniform(rng, 0, 1), v = gen::uniform(rng, 0, 1);
    auto hp = element_point(m, q, u, v);
    auto xy = m.render_xy(hp.host, hp.x, hp.y);
    for (size_t f = 0; f < b.size(); ++f) {
      auto a = *m.node(b.fns[f].anchor).xy;
      double hat = std::max(0.0, 1 - std::abs(xy[0] - a[0])) * std::max(0.0, 1 - std::abs(xy[1] - a[1]));
      CHECK(b.eval(f, hp) == doctest::Approx(hat).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: refined grids reproduce 1, x, y and xy from Greville coefficients") {
  std::mt19937_64 seeds(42);
  for (int trial = 0; trial < 4; ++trial) {
    int p = trial % 2 ? 3 : 1;
    TMesh m = TMesh::from_initial(grid_document(6, 6, p));
    gen::refine_randomly(m, 12, seeds());
    Basis b = assemble_basis(m);
    // Greville abscissae: anchor position plus the mean of the inner knots.
    std::vector<double> gx(b.size()), gy(b.size());
    for (size_t f = 0; f < b.size(); ++f) {
      const auto& ch = b.charts[b.fns[f].chart];
      auto a = *m.node(ch.anchor).xy;
      double mu = 0, mv = 0;
      for (int i = 1; i <= p; ++i) {
        mu += ch.kv_u[i] / p;
        mv += ch.kv_v[i] / p;
      }
      gx[f] = a[0] + mu;
      gy[f] = a[1] + mv;
    }
    auto eligible = reproduction_eligible(m);
    REQUIRE_FALSE(eligible.empty());
    std::mt19937_64 rng(seeds());
    for (int s = 0; s < 40; ++s) {
      int q = eligible[rng() % eligible.size()];
      double u = gen::uniform(rng, 0, 1), v = gen::uniform(rng, 0, 1);
      auto hp = element_point(m, q, u, v);
      auto xy = m.render_xy(hp.host, hp.x, hp.y);
      CHECK(combine(m, b, q, u, v, [](int) { return 1.0; }) == doctest::Approx(1).epsilon(1e-12));
      CHECK(combine(m, b, q, u, v, [&](int f) { return gx[f]; }) == doctest::Approx(xy[0]).epsilon(1e-12));
      CHECK(combine(m, b, q, u, v, [&](int f) { return gy[f]; }) == doctest::Approx(xy[1]).epsilon(1e-12));
      CHECK(combine(m, b, q, u, v, [&](int f) { return gx[f] * gy[f]; }) ==
            doctest::Approx(xy[0] * xy[1]).epsilon(1e-12));
    }
  }
}

TEST_CASE("polynomial reproduction check on eligible elements") {
  TMesh m = TMesh::from_initial(star_document(5, 5, 3));
  gen::refine_randomly(m, 10, 9);
  Basis b = assemble_basis(m);
  auto r = check_poly_reproduction_sample(m, b, 10, 7, 1e-9);
  CHECK_MESSAGE(r.passed(), r.to_json().dump());
  int at_ev = m.node(m.extraordinary_nodes()[0]).elems[0];
  CHECK_THROWS_AS(check_poly_reproduction(m, b, at_ev), std::invalid_argument);
}

TEST_CASE("locality of support: every function vanishes off its candidate windows") {
  TMesh m = TMesh::from_initial(grid_document(5, 5, 3));
  gen::refine_randomly(m, 8, 4);
  Basis b = assemble_basis(m);
  std::mt19937_64 rng(43);
  auto act = m.active_elements();
  std::vector<int> cand;
  for (int s = 0; s < 100; ++s) {
    int q = act[rng() % act.size()];
    auto hp = element_point(m, q, gen::uniform(rng, 0, 1), gen::uniform(rng, 0, 1));
    b.candidates(hp, cand);
    for (size_t f = 0; f < b.size(); ++f)
      if (!std::binary_search(cand.begin(), cand.end(), int(f))) CHECK(b.eval(f, hp) == 0.0);
  }
}
