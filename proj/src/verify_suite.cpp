#include <chrono>

#include "tspline/bezier.hpp"
#include "tspline/direction.hpp"
#include "tspline/verify.hpp"

namespace tsp {

namespace {

nlohmann::ordered_json mesh_report(const Report& r) {
  CheckReport c;
  c.check = r.check;
  for (const auto& v : r.violations) c.violations.push_back({{"message", v}});
  return c.to_json();
}

}  // namespace

nlohmann::ordered_json verify_suite(const TMesh& mesh, const RefineTrace* trace,
                                    const SuiteOptions& opt) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  bool ok = true;
  auto add = [&](const CheckReport& r, double seconds) {
    auto j = r.to_json();
    j["seconds"] = seconds;
    ok = ok && r.passed();
    checks.push_back(j);
  };
  auto timed = [&](auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    CheckReport r = fn();
    add(r, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  };

  auto lab = validate_labeling(mesh);
  ok = ok && lab.ok();
  checks.push_back(mesh_report(lab));
  if (!mesh.refined()) {
    auto reg = validate_regular(mesh);
    ok = ok && reg.ok();
    checks.push_back(mesh_report(reg));
  }
  timed([&] { return check_quasi_uniformity(mesh); });
  if (trace) {
    timed([&] { return check_locality(*trace, mesh); });
    timed([&] { return check_complexity_ratio(*trace, opt.complexity); });
  }
  timed([&] { return check_bezier_invariants(mesh); });
  timed([&] { return check_analysis_suitability(mesh); });

  TMesh bez = bezier_mesh(mesh);
  Basis basis;
  try {
    basis = assemble_basis(mesh);
  } catch (const std::exception& ex) {
    CheckReport r;
    r.check = "basis_assembly";
    r.violations.push_back({{"message", ex.what()}});
    add(r, 0);
    return {{"status", "fail"}, {"checks", checks}};
  }
  timed([&] { return check_linear_independence(bez, basis); });
  timed([&] {
    SmoothnessOptions so;
    so.samples = opt.smoothness_samples;
    so.seed = opt.seed;
    return check_smoothness(bez, basis, so);
  });
  timed([&] {
    return check_poly_reproduction_sample(mesh, basis, opt.reproduction_elements, opt.seed);
  });
  return {{"status", ok ? "pass" : "fail"}, {"checks", checks}};
}

}  // namespace tsp
