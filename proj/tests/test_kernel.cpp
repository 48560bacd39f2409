#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "tspline/basis.hpp"

namespace {

// Textbook Cox-de Boor on half-open intervals, written from scratch.
double cox_de_boor(const std::vector<double>& t, int i, int p, double x) {
  if (p == 0) return (t[i] <= x && x < t[i + 1]) ? 1.0 : 0.0;
  double a = 0, b = 0;
  if (t[i + p] > t[i]) a = (x - t[i]) / (t[i + p] - t[i]) * cox_de_boor(t, i, p - 1, x);
  if (t[i + p + 1] > t[i + 1])
    b = (t[i + p + 1] - x) / (t[i + p + 1] - t[i + 1]) * cox_de_boor(t, i + 1, p - 1, x);
  return a + b;
}

double cox_de_boor_deriv(const std::vector<double>& t, int p, double x) {
  double a = 0, b = 0;
  if (t[p] > t[0]) a = p / (t[p] - t[0]) * cox_de_boor(t, 0, p - 1, x);
  if (t[p + 1] > t[1]) b = p / (t[p + 1] - t[1]) * cox_de_boor(t, 1, p - 1, x);
  return a - b;
}

}  // namespace

TEST_CASE("bspline_eval agrees with Cox-de Boor on random knots") {
  std::mt19937_64 rng(11);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int p = 1 + int(rng() % 5);
    auto t = gen::knots(rng, p + 2);
    double x = gen::uniform(rng, t.front() - 0.5, t.back() + 0.5);
    CHECK(std::abs(tsp::bspline_eval(t, x) - cox_de_boor(t, 0, p, x)) <= 1e-13);
    ++compared;
  }
  CHECK(compared == 1000);
}

TEST_CASE("bspline_eval first derivative agrees with the derivative recursion") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    int p = 2 + int(rng() % 4);
    auto t = gen::knots(rng, p + 2);
    double x = gen::uniform(rng, t.front(), t.back());
    CHECK(std::abs(tsp::bspline_eval(t, x, 1) - cox_de_boor_deriv(t, p, x)) <= 1e-11);
  }
}

TEST_CASE("uniform B-spline values") {
  CHECK(std::abs(tsp::bspline_eval({0, 1, 2, 3, 4}, 2.0) - 2.0 / 3.0) <= 1e-15);
  CHECK(tsp::bspline_eval({0, 1, 2}, 1.0) == doctest::Approx(1.0));
  CHECK(tsp::bspline_eval({0, 1, 2}, 0.5) == doctest::Approx(0.5));
  CHECK(tsp::bspline_eval({0, 1, 2}, -0.1) == 0.0);
  CHECK(tsp::bspline_eval({0, 1, 2}, 2.1) == 0.0);
  // quadratic at its center: 3/4
  CHECK(tsp::bspline_eval({0, 1, 2, 3}, 1.5) == doctest::Approx(0.75));
}

TEST_CASE("bspline_eval is right-continuous at interior knots and closed at the last knot") {
  std::vector<double> t{0, 0, 1, 2};  // quadratic, jump of the derivative at 0
  CHECK(tsp::bspline_eval(t, 0.0) == doctest::Approx(cox_de_boor(t, 0, 2, 0.0)));
  std::vector<double> step{0, 0, 1};  // linear with a value jump at 0
  CHECK(tsp::bspline_eval(step, 0.0) == doctest::Approx(1.0));
  std::vector<double> end{0, 1, 1};
  CHECK(tsp::bspline_eval(end, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("knot partition of unity") {
  // Sum of all degree p B-splines on a long knot vector is 1 inside.
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    int p = 1 + int(rng() % 4);
    auto t = gen::knots(rng, 3 * p + 6);
    double lo = t[p], hi = t[t.size() - p - 1];
    if (!(hi > lo)) continue;
    double x = gen::uniform(rng, lo, hi);
    double sum = 0;
    for (size_t i = 0; i + p + 2 <= t.size(); ++i)
      sum += tsp::bspline_eval(std::vector<double>(t.begin() + i, t.begin() + i + p + 2), x);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("EV trace functions are tensor products of uniform B-splines") {
  // index 0 in one dimension and -1 in another, p = 3: centered at 0 and -1
  std::vector<int> idx{0, -1};
  std::vector<double> x{0.3, -0.2};
  double a = tsp::bspline_eval({-2, -1, 0, 1, 2}, 0.3);
  double b = tsp::bspline_eval({-3, -2, -1, 0, 1}, -0.2);
  CHECK(tsp::ev_trace_eval(idx, 3, x) == doctest::Approx(a * b));
}
