#include "doctest.h"
#include "generators.hpp"
#include "tspline/bezier.hpp"
#include "tspline/meshgen.hpp"
#include "tspline/verify.hpp"

using namespace tsp;

namespace {

// Grid mesh with the interior vertical edge x=3, y in [2,3] bisected once.
TMesh grid_with_inode(int p) {
  TMesh m = TMesh::from_initial(grid_document(6, 6, p));
  ensure_labels(m);
  tsp::subdiv(m, m.edge_between(2 * 7 + 3, 3 * 7 + 3));
  return m;
}

}  // namespace

TEST_CASE("Bezier mesh of a regular mesh is the mesh itself") {
  for (int p : {1, 3}) {
    TMesh m = TMesh::from_initial(grid_document(4, 4, p));
    TMesh b = bezier_mesh(m);
    CHECK(b.active_elements().size() == 16);
    CHECK(check_bezier_invariants(m).passed());
  }
}

TEST_CASE("one I-node extends ceil(p/2) elements to each side") {
  // The I-node has two elements; each extension step splits one element.
  BezierStats st;
  CHECK(bezier_mesh(grid_with_inode(1), &st).active_elements().size() == 36 + 2);
  CHECK(st.malformed_elements == 0);
  CHECK(bezier_mesh(grid_with_inode(3), &st).active_elements().size() == 36 + 4);
  CHECK(st.malformed_elements == 0);
}

TEST_CASE("Bezier extraction is idempotent") {
  TMesh m = grid_with_inode(3);
  auto r = check_bezier_invariants(m);
  CHECK_MESSAGE(r.passed(), r.to_json().dump());
  TMesh b = bezier_mesh(m);
  CHECK(bezier_mesh(b).active_elements().size() == b.active_elements().size());
}

TEST_CASE("continuity map around an extraordinary node") {
  // p=3: each of the 5 spokes plus two prolongation edges is C0.
  TMesh s = TMesh::from_initial(star_document(5, 4, 3));
  auto cm = continuity_map(s, s.extraordinary_nodes());
  int zero = 0, smooth = 0;
  for (auto [e, k] : cm) {
    zero += k == 0;
    smooth += k == 2;
  }
  CHECK(zero == 15);
  CHECK(zero + smooth == int(cm.size()));
  CHECK(int(cm.size()) == s.count_active_edges());

  TMesh g = TMesh::from_initial(grid_document(3, 3, 3));
  for (auto [e, k] : continuity_map(g, {})) CHECK(k == 2);
}

TEST_CASE("property: small random refinements give well formed Bezier meshes") {
  std::mt19937_64 seeds(31);
  int checked = 0;
  for (int trial = 0; trial < 8; ++trial) {
    int p = trial % 2 ? 3 : 1;
    TMesh m = TMesh::from_initial(grid_document(6, 6, p));
    gen::refine_randomly(m, 4, seeds());
    if (!check_quasi_uniformity(m).passed()) continue;  // malformed elements only follow level jumps
    auto r = check_bezier_invariants(m);
    CHECK_MESSAGE(r.passed(), r.to_json().dump());
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("analysis suitability: refined meshes pass, crossing extensions fail") {
  TMesh m = TMesh::from_initial(grid_document(6, 6, 3));
  gen::refine_randomly(m, 15, 5);
  auto ok = check_analysis_suitability(m);
  CHECK_MESSAGE(ok.passed(), ok.to_json().dump());

  // Raw bisections of x=1, y in [0,1] and y=1, x in [2,3]: the horizontal
  // and the vertical extension meet.
  TMesh bad = TMesh::from_initial(grid_document(8, 8, 3));
  ensure_labels(bad);
  tsp::subdiv(bad, bad.edge_between(1, 10));
  tsp::subdiv(bad, bad.edge_between(11, 12));
  auto r = check_analysis_suitability(bad);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0]["kind"] == "crossing");

  // Two bisections on adjacent sides of one element: both extensions stop.
  TMesh cross = TMesh::from_initial(grid_document(6, 6, 1));
  ensure_labels(cross);
  tsp::subdiv(cross, cross.edge_between(2 * 7 + 2, 3 * 7 + 2));
  tsp::subdiv(cross, cross.edge_between(3 * 7 + 2, 3 * 7 + 3));
  auto rc = check_analysis_suitability(cross);
  CHECK(rc.violations.size() == 2);
  for (const auto& v : rc.violations) CHECK(v["kind"] == "blocked");
  CHECK_FALSE(check_bezier_invariants(cross).passed());
}
