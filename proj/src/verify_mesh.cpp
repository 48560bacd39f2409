#include <algorithm>
#include <cmath>
#include <set>

#include "tspline/verify.hpp"

namespace tsp {

using json = nlohmann::ordered_json;

json CheckReport::to_json() const {
  json j;
  j["check"] = check;
  j["status"] = passed() ? "pass" : "fail";
  j["violations"] = violations;
  j["info"] = info;
  return j;
}

namespace {

enum class Order { Less, Equal, Greater };

Order compare_di(const EdgeRec& ep, const EdgeRec& e) {
  if (ep.max_di() < e.min_di()) return Order::Less;
  if (ep.min_di() > e.max_di()) return Order::Greater;
  return Order::Equal;
}

// Violation record for E' in N(E), or null.
json window_violation(const EdgeRec& E, const EdgeRec& Ep) {
  Order o = compare_di(Ep, E);
  int lo = E.level - 1, hi = E.level + 1;
  const char* name = "di(E')=di(E)";
  if (o == Order::Less) {
    lo = E.level;
    name = "di(E')<di(E)";
  } else if (o == Order::Greater) {
    hi = E.level;
    name = "di(E')>di(E)";
  }
  if (Ep.level >= lo && Ep.level <= hi) return nullptr;
  json v;
  v["E"] = E.id;
  v["E_prime"] = Ep.id;
  v["case"] = name;
  v["inequality"] = std::to_string(lo) + " <= " + std::to_string(Ep.level) + " <= " + std::to_string(hi);
  return v;
}

void sort_violations(std::vector<json>& v) {
  std::sort(v.begin(), v.end(), [](const json& a, const json& b) {
    return std::make_pair(a["E"].get<int>(), a["E_prime"].get<int>()) <
           std::make_pair(b["E"].get<int>(), b["E_prime"].get<int>());
  });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void check_edge(const TMesh& mesh, int e, std::vector<json>& out) {
  const EdgeRec& E = mesh.edge(e);
  for (int f : edge_neighborhood(mesh, e)) {
    if (f == e) continue;
    json v = window_violation(E, mesh.edge(f));
    if (!v.is_null()) out.push_back(std::move(v));
  }
}

}  // namespace

CheckReport check_quasi_uniformity_serial(const TMesh& mesh) {
  CheckReport r;
  r.check = "quasi_uniformity";
  auto act = mesh.active_edges();
  for (int e : act) check_edge(mesh, e, r.violations);
  sort_violations(r.violations);
  r.info["edges_checked"] = act.size();
  return r;
}

CheckReport check_quasi_uniformity(const TMesh& mesh) {
  CheckReport r;
  r.check = "quasi_uniformity";
  auto act = mesh.active_edges();
  std::vector<std::vector<json>> per(act.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < long(act.size()); ++i) check_edge(mesh, act[i], per[i]);
  for (auto& v : per)
    for (auto& x : v) r.violations.push_back(std::move(x));
  sort_violations(r.violations);
  r.info["edges_checked"] = act.size();
  return r;
}

CheckReport check_locality(const RefineTrace& trace, const TMesh& mesh) {
  CheckReport r;
  r.check = "locality";
  int p = trace.degree;
  std::set<int> seen;
  size_t pairs = 0;
  double worst = 0;
  for (size_t i = 0; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    if (rec.produced.empty()) continue;
    double C1 = locality_constant(p, std::max(rec.K, 1));
    for (const auto& pe : rec.produced) {
      ++pairs;
      if (!seen.insert(pe.id).second)
        r.violations.push_back({{"record", i}, {"E_prime", pe.id}, {"inequality", "produced twice"}});
      if (pe.id >= mesh.num_edges() || mesh.edge(pe.id).level != pe.level)
        r.violations.push_back({{"record", i}, {"E_prime", pe.id}, {"inequality", "edge not in mesh"}});
      if (pe.level > rec.mark_level + 1)
        r.violations.push_back({{"record", i},
                                {"E", rec.mark},
                                {"E_prime", pe.id},
                                {"inequality", std::to_string(pe.level) + " <= " +
                                                   std::to_string(rec.mark_level + 1)}});
      double bound = C1 * std::ldexp(1.0, -pe.level);
      if (!(pe.dist_hi < bound)) {
        json v{{"record", i}, {"E", rec.mark}, {"E_prime", pe.id}};
        v["inequality"] = "dist " + (std::isinf(pe.dist_hi) ? std::string(">= bound") : std::to_string(pe.dist_hi)) +
                          " < " + std::to_string(bound) + " (K=" + std::to_string(rec.K) + ")";
        r.violations.push_back(v);
      } else {
        worst = std::max(worst, pe.dist_hi / bound);
      }
    }
  }
  r.info["pairs"] = pairs;
  r.info["worst_dist_over_bound"] = worst;
  return r;
}

CheckReport check_complexity_ratio(const RefineTrace& trace, const ComplexityOptions& opt) {
  CheckReport r;
  r.check = "complexity_ratio";
  std::vector<double> ratio;  // after each user mark
  int marks = 0, last_active = trace.initial_active_edges;
  auto flush = [&]() {
    if (marks > 0) ratio.back() = double(last_active - trace.initial_active_edges) / marks;
  };
  for (const auto& rec : trace.records) {
    if (rec.source == "mark") {
      ++marks;
      ratio.push_back(0);
    }
    last_active = rec.active_edges_after;
    flush();
  }
  double mx = 0;
  std::vector<double> running;
  for (double v : ratio) {
    mx = std::max(mx, v);
    running.push_back(mx);
  }
  r.info["marks"] = marks;
  r.info["ratios"] = ratio;
  r.info["max_ratio"] = mx;
  r.info["ceiling"] = opt.ceiling;
  if (ratio.empty()) {
    r.violations.push_back({{"inequality", "no marks in trace"}});
    return r;
  }
  for (size_t j = 0; j < ratio.size(); ++j)
    if (!(ratio[j] < opt.ceiling))
      r.violations.push_back({{"mark", j + 1},
                              {"inequality", std::to_string(ratio[j]) + " < " + std::to_string(opt.ceiling)}});
  if (int(ratio.size()) > opt.tail) {
    double before = running[ratio.size() - opt.tail - 1];
    r.info["running_max_before_tail"] = before;
    if (before < mx)
      r.violations.push_back({{"inequality", "running maximum still grows in the last " +
                                                 std::to_string(opt.tail) + " marks: " +
                                                 std::to_string(before) + " -> " + std::to_string(mx)}});
  }
  return r;
}

}  // namespace tsp
