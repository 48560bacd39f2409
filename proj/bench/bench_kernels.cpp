// Serial vs OpenMP kernels. The sandbox this was written in has one core, so
// both variants are expected to take about the same time there.

#include <map>
#include <random>

#include <benchmark/benchmark.h>

#include "tspline/basis.hpp"
#include "tspline/bezier.hpp"
#include "tspline/direction.hpp"
#include "tspline/meshgen.hpp"
#include "tspline/refine.hpp"
#include "tspline/verify.hpp"

namespace {

const tsp::TMesh& refined_star(int p, int marks) {
  static std::map<std::pair<int, int>, tsp::TMesh> cache;
  auto it = cache.find({p, marks});
  if (it != cache.end()) return it->second;
  tsp::TMesh m = tsp::TMesh::from_initial(tsp::star_document(5, 5, p));
  tsp::ensure_labels(m);
  std::mt19937_64 rng(7);
  for (int i = 0; i < marks; ++i) {
    auto act = m.active_edges();
    tsp::refine(m, act[rng() % act.size()]);
  }
  return cache.emplace(std::make_pair(p, marks), std::move(m)).first->second;
}

void BM_QuasiUniformity(benchmark::State& st) {
  const auto& m = refined_star(int(st.range(0)), int(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(tsp::check_quasi_uniformity(m));
  st.counters["edges"] = m.count_active_edges();
}

void BM_QuasiUniformitySerial(benchmark::State& st) {
  const auto& m = refined_star(int(st.range(0)), int(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(tsp::check_quasi_uniformity_serial(m));
  st.counters["edges"] = m.count_active_edges();
}

struct BasisFixture {
  tsp::TMesh bezier;
  tsp::Basis basis;
};

const BasisFixture& basis_fixture(int p, int marks) {
  static std::map<std::pair<int, int>, BasisFixture> cache;
  auto it = cache.find({p, marks});
  if (it != cache.end()) return it->second;
  const auto& m = refined_star(p, marks);
  BasisFixture f{tsp::bezier_mesh(m), tsp::assemble_basis(m)};
  return cache.emplace(std::make_pair(p, marks), std::move(f)).first->second;
}

void BM_Collocation(benchmark::State& st) {
  const auto& f = basis_fixture(int(st.range(0)), int(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(tsp::collocation_matrix(f.bezier, f.basis));
  st.counters["functions"] = double(f.basis.size());
}

void BM_CollocationSerial(benchmark::State& st) {
  const auto& f = basis_fixture(int(st.range(0)), int(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(tsp::collocation_matrix_serial(f.bezier, f.basis));
  st.counters["functions"] = double(f.basis.size());
}

void BM_BsplineEval(benchmark::State& st) {
  std::vector<double> t{0, 0.5, 1, 2, 2.5};
  double x = 0.1, s = 0;
  for (auto _ : st) {
    s += tsp::bspline_eval(t, x);
    x = x > 2.4 ? 0.1 : x + 0.013;
  }
  benchmark::DoNotOptimize(s);
}

}  // namespace

BENCHMARK(BM_QuasiUniformity)->Args({1, 100})->Args({3, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuasiUniformitySerial)->Args({1, 100})->Args({3, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Collocation)->Args({1, 100})->Args({3, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CollocationSerial)->Args({1, 100})->Args({3, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BsplineEval);

BENCHMARK_MAIN();
