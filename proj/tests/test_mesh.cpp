#include <random>
#include <set>

#include "doctest.h"
#include "generators.hpp"
#include "tspline/direction.hpp"
#include "tspline/meshgen.hpp"
#include "tspline/refine.hpp"
#include "tspline/verify.hpp"

using namespace tsp;

TEST_CASE("initial grid counts") {
  TMesh m = TMesh::from_initial(grid_document(3, 2, 1));
  CHECK(m.num_nodes() == 12);
  CHECK(m.count_active_edges() == 3 * 3 + 4 * 2);
  CHECK(m.active_elements().size() == 6);
  CHECK_FALSE(m.refined());
  CHECK(validate_regular(m).ok());
}

TEST_CASE("node kinds on a star") {
  TMesh m = TMesh::from_initial(star_document(5, 3, 1));
  auto evs = m.extraordinary_nodes();
  REQUIRE(evs.size() == 1);
  CHECK(m.classify(evs[0]) == NodeKind::Extraordinary);
  CHECK(m.valence(evs[0]) == 5);
}

TEST_CASE("json round trip keeps the mesh") {
  TMesh m = TMesh::from_initial(grid_document(4, 4, 3));
  gen::refine_randomly(m, 10, 3);
  auto j = m.to_json();
  TMesh r = TMesh::from_json(j);
  CHECK(r.to_json() == j);
  CHECK(r.count_active_edges() == m.count_active_edges());
  CHECK(r.degree() == 3);
}

TEST_CASE("malformed documents are rejected") {
  auto j = TMesh::from_initial(grid_document(2, 2, 1)).to_json();
  j.erase("elements");
  CHECK_THROWS_AS(TMesh::from_json(j), std::invalid_argument);
}

TEST_CASE("subdiv of an interior edge leaves one hanging node") {
  TMesh m = TMesh::from_initial(grid_document(4, 4, 1));
  ensure_labels(m);
  int e = m.edge_between(6, 11);  // vertical edge x=1, y in [1,2]
  REQUIRE(e >= 0);
  auto r = tsp::subdiv(m, e);
  CHECK_FALSE(m.edge(e).active);
  REQUIRE(r.mid_node >= 0);
  CHECK(m.node(r.mid_node).edges.size() == 2);
  for (int f : m.node(r.mid_node).edges) CHECK(m.edge(f).level == 1);
  CHECK(m.classify(r.mid_node) == NodeKind::INode);
  CHECK(m.active_elements().size() == 16);
}

TEST_CASE("direction labeling of a grid") {
  TMesh m = TMesh::from_initial(grid_document(3, 3, 1));
  auto out = compute_direction_labeling(m);
  REQUIRE(out.found);
  CHECK(out.labeling.strict);
  ensure_labels(m);
  CHECK(validate_labeling(m).ok());
  std::set<int> used;
  for (int e : m.active_edges()) used.insert(m.edge(e).min_di());
  CHECK(used.size() == 2);
}

TEST_CASE("labeling with equal indices on adjacent edges is rejected") {
  TMesh m = TMesh::from_initial(grid_document(2, 2, 1));
  std::vector<std::vector<int>> di(m.num_edges(), std::vector<int>{0});
  m.set_labels(di);
  auto r = validate_labeling(m);
  CHECK_FALSE(r.ok());
  bool cites_element = false;
  for (const auto& v : r.violations) cites_element |= v.find("element") != std::string::npos;
  CHECK(cites_element);
}

TEST_CASE("twisted mesh has no strict labeling but an admissible one") {
  TMesh m = TMesh::from_initial(twisted_document(1));
  auto out = compute_direction_labeling(m);
  CHECK((!out.found || !out.labeling.strict));
  MeshDocument d = twisted_document(1);
  d.direction_labels = twisted_labels();
  TMesh t = TMesh::from_initial(d);
  CHECK(t.labeled());
  CHECK(validate_labeling(t).ok());
}

TEST_CASE("ring and star meshes are regular after rebasing") {
  for (int p : {1, 3}) {
    TMesh r = TMesh::from_initial(ring_document(p));
    for (int i = 0; i < 3 && !validate_regular(r).ok(); ++i) r = uniform_refine_rebase(r);
    CHECK(validate_regular(r).ok());
    CHECK(r.extraordinary_nodes().size() == 5);
  }
}

TEST_CASE("property: refinement keeps at most two edges per element side") {
  std::mt19937_64 seeds(21);
  for (int trial = 0; trial < 6; ++trial) {
    int p = trial % 2 ? 3 : 1;
    TMesh m = TMesh::from_initial(trial < 4 ? grid_document(5, 5, p) : star_document(5, 4, p));
    gen::refine_randomly(m, 30, seeds());
    for (int q : m.active_elements())
      for (const auto& side : m.element(q).sides) CHECK(side.size() <= 2);
  }
}

TEST_CASE("property: every trace record respects the locality bound") {
  std::mt19937_64 seeds(22);
  for (int trial = 0; trial < 4; ++trial) {
    int p = trial % 2 ? 3 : 1;
    TMesh m = TMesh::from_initial(grid_document(6, 6, p));
    auto trace = gen::refine_randomly(m, 40, seeds());
    auto rep = check_locality(trace, m);
    CHECK_MESSAGE(rep.passed(), rep.to_json().dump());
    for (const auto& rec : trace.records)
      for (const auto& pe : rec.produced) CHECK(pe.level <= rec.mark_level + 1);
  }
}

TEST_CASE("locality constant") {
  // K = 1: 1/2 + 2(p+1)/(2*1)
  CHECK(locality_constant(1, 1) == doctest::Approx(2.5));
  CHECK(locality_constant(3, 1) == doctest::Approx(4.5));
  double r = std::pow(2.0, 0.5);
  CHECK(locality_constant(1, 2) == doctest::Approx(0.5 + 4 / (r * (r - 1))));
}

TEST_CASE("mesh distance on a grid is the sup norm") {
  TMesh m = TMesh::from_initial(grid_document(6, 6, 1));
  GridPoint a = m.node(8).pos;   // (1,1)
  GridPoint b = m.node(24).pos;  // (3,3)
  GridPoint c = m.node(11).pos;  // (4,1)
  auto d1 = mesh_dist(m, a, b, 10);
  auto d2 = mesh_dist(m, a, c, 10);
  REQUIRE(d1);
  REQUIRE(d2);
  CHECK(*d1 == doctest::Approx(2));
  CHECK(*d2 == doctest::Approx(3));
  CHECK_FALSE(mesh_dist(m, a, c, 2.5));
}
