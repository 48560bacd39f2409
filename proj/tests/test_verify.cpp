#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "generators.hpp"
#include "tspline/bezier.hpp"
#include "tspline/meshgen.hpp"
#include "tspline/verify.hpp"

using namespace tsp;

namespace {

Eigen::SparseMatrix<double> sparse(const Eigen::MatrixXd& d) {
  Eigen::SparseMatrix<double> s = d.sparseView();
  s.makeCompressed();
  return s;
}

// Dense random matrix of rank r as a product of two Gaussian factors.
Eigen::MatrixXd low_rank(std::mt19937_64& rng, int rows, int cols, int r) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd u(rows, r), v(r, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < r; ++j) u(i, j) = g(rng);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < cols; ++j) v(i, j) = g(rng);
  return u * v;
}

}  // namespace

TEST_CASE("numerical rank of full rank and duplicated columns") {
  std::mt19937_64 rng(51);
  Eigen::MatrixXd a = low_rank(rng, 300, 40, 40);
  CHECK(numerical_rank(sparse(a)).rank == 40);
  a.col(17) = a.col(3) * 2.5;
  CHECK(numerical_rank(sparse(a)).rank == 39);
}

TEST_CASE("property: numerical rank recovers random low ranks") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    int rows = 100 + int(rng() % 300), cols = 10 + int(rng() % 60);
    int r = 1 + int(rng() % cols);
    auto res = numerical_rank(sparse(low_rank(rng, rows, cols, r)));
    CHECK(res.rank == r);
    CHECK(res.cols == cols);
  }
}

TEST_CASE("numerical rank on a block diagonal matrix larger than one leaf") {
  // Blocks of 8 columns, each supported on its own 100 rows, one block
  // rank deficient: the frontal reduction must keep blocks apart.
  std::mt19937_64 rng(53);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1000, 80);
  for (int b = 0; b < 10; ++b) a.block(100 * b, 8 * b, 100, 8) = low_rank(rng, 100, 8, b == 4 ? 5 : 8);
  CHECK(numerical_rank(sparse(a)).rank == 77);
}

TEST_CASE("collocation assembly: OpenMP equals the serial reference") {
  TMesh m = TMesh::from_initial(star_document(5, 4, 3));
  gen::refine_randomly(m, 10, 6);
  Basis b = assemble_basis(m);
  TMesh bz = bezier_mesh(m);
  auto a = collocation_matrix(bz, b);
  auto s = collocation_matrix_serial(bz, b);
  REQUIRE(a.rows() == s.rows());
  REQUIRE(a.cols() == s.cols());
  CHECK(a.nonZeros() == s.nonZeros());
  CHECK((Eigen::MatrixXd(a) - Eigen::MatrixXd(s)).cwiseAbs().maxCoeff() == 0.0);
  int p = m.degree();
  CHECK(a.rows() == int(bz.active_elements().size()) * (p + 1) * (p + 1));
  CHECK(a.cols() == int(b.size()));
}

TEST_CASE("quasi-uniformity: OpenMP equals the serial reference") {
  std::mt19937_64 seeds(54);
  for (int trial = 0; trial < 3; ++trial) {
    TMesh m = TMesh::from_initial(grid_document(6, 6, 1 + 2 * (trial % 2)));
    gen::refine_randomly(m, 20, seeds());
    CHECK(check_quasi_uniformity(m).to_json() == check_quasi_uniformity_serial(m).to_json());
  }
}

TEST_CASE("quasi-uniformity holds on meshes with one refine") {
  for (int p : {1, 3}) {
    TMesh m = TMesh::from_initial(grid_document(6, 6, p));
    gen::refine_randomly(m, 1, 2);
    CHECK(check_quasi_uniformity(m).passed());
  }
}

TEST_CASE("linear independence, smoothness on refined meshes") {
  for (int p : {1, 3}) {
    TMesh m = TMesh::from_initial(star_document(5, 5, p));
    gen::refine_randomly(m, 15, 8);
    Basis b = assemble_basis(m);
    TMesh bz = bezier_mesh(m);
    auto li = check_linear_independence(bz, b);
    CHECK_MESSAGE(li.passed(), li.to_json().dump());
    CHECK(li.info["rank"].get<int>() == int(b.size()));
    auto sm = check_smoothness(bz, b, {});
    CHECK_MESSAGE(sm.passed(), sm.to_json().dump());
    CHECK(sm.info["edges"].get<int>() > 0);
  }
}

TEST_CASE("smoothness check sees a broken function") {
  // Shift one knot of one structured function: the C^{p-1} check must fail.
  TMesh m = TMesh::from_initial(grid_document(5, 5, 3));
  ensure_labels(m);
  Basis b = assemble_basis(m);
  int f = 0;
  for (; f < int(b.size()); ++f)
    if (m.node(b.charts[b.fns[f].chart].anchor).xy == std::array<double, 2>{2, 2}) break;
  REQUIRE(f < int(b.size()));
  auto& kv = b.charts[b.fns[f].chart].kv_u;
  kv[1] += 0.5;  // interior knot moves off the element boundary
  SmoothnessOptions opt;
  opt.samples = 1000;
  auto sm = check_smoothness(bezier_mesh(m), b, opt);
  CHECK_FALSE(sm.passed());
}

TEST_CASE("suite report shape") {
  TMesh m = TMesh::from_initial(grid_document(4, 4, 1));
  auto trace = gen::refine_randomly(m, 3, 1);
  auto j = verify_suite(m, &trace);
  REQUIRE(j.contains("checks"));
  std::vector<std::string> names;
  for (const auto& c : j["checks"]) names.push_back(c["check"]);
  for (const char* want : {"quasi_uniformity", "locality", "complexity_ratio", "bezier_invariants",
                           "analysis_suitability", "linear_independence", "smoothness",
                           "poly_reproduction"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
}
