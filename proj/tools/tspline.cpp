#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tspline/basis.hpp"
#include "tspline/bezier.hpp"
#include "tspline/direction.hpp"
#include "tspline/marks.hpp"
#include "tspline/meshgen.hpp"
#include "tspline/refine.hpp"
#include "tspline/svg.hpp"
#include "tspline/verify.hpp"

using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadInput = 2;

// Thrown for anything wrong with the inputs; maps to exit code 2.
struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

tsp::TMesh load_mesh(const std::string& path) {
  try {
    return tsp::TMesh::load(path);
  } catch (const std::invalid_argument& ex) {
    throw BadInput(path + ": " + ex.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw BadInput("cannot write " + path);
  out << text;
}

std::string dump(const ordered_json& j) { return j.dump(1) + "\n"; }

void label(tsp::TMesh& m) {
  try {
    tsp::ensure_labels(m);
  } catch (const std::exception& ex) {
    throw BadInput(std::string("no direction labeling: ") + ex.what());
  }
}

int cmd_gen(const std::string& kind, int p, int n, int k, const std::string& out) {
  tsp::MeshDocument doc;
  if (kind == "grid") doc = tsp::grid_document(n, n, p);
  else if (kind == "star") doc = tsp::star_document(k, n, p);
  else if (kind == "ring") doc = tsp::ring_document(p);
  else if (kind == "twisted") doc = tsp::twisted_document(p);
  else throw BadInput("unknown mesh kind '" + kind + "'");
  tsp::TMesh m = tsp::TMesh::from_initial(doc);
  // Coarse EV neighborhoods get rebased until the disk conditions hold.
  for (int i = 0; i < 3 && kind != "twisted" && !tsp::validate_regular(m).ok(); ++i)
    m = tsp::uniform_refine_rebase(m);
  if (kind == "twisted") {
    auto labels = tsp::twisted_labels();
    tsp::MeshDocument d2 = doc;
    d2.direction_labels = labels;
    m = tsp::TMesh::from_initial(d2);
  } else {
    label(m);
  }
  write_text(out, dump(m.to_json()));
  return kOk;
}

int cmd_check(const std::string& in, const std::string& out) {
  tsp::TMesh m = load_mesh(in);
  ordered_json checks = ordered_json::array();
  bool ok = true;
  auto add = [&](const tsp::Report& r) {
    ok = ok && r.ok();
    checks.push_back(r.to_json());
  };
  if (!m.refined()) add(tsp::validate_regular(m));
  if (m.labeled()) {
    add(tsp::validate_labeling(m));
  } else {
    auto outcome = tsp::compute_direction_labeling(m);
    tsp::Report r;
    r.check = "direction_labeling";
    if (!outcome.found) r.violations.push_back(outcome.message);
    add(r);
  }
  write_text(out, dump({{"status", ok ? "pass" : "fail"}, {"checks", checks}}));
  return ok ? kOk : kViolation;
}

int cmd_refine(const std::string& in, int p, const std::vector<std::string>& marks,
               const std::string& out, const std::string& trace_path) {
  tsp::TMesh m = load_mesh(in);
  if (p > 0) {
    if (p % 2 == 0) throw BadInput("--p must be odd");
    if (m.refined() && p != m.degree())
      throw BadInput("mesh was refined with p=" + std::to_string(m.degree()));
    if (!m.refined()) m.set_degree(p);
  }
  label(m);
  std::vector<int> edges;
  try {
    edges = tsp::resolve_marks(m, marks);
  } catch (const tsp::MarkError& ex) {
    throw BadInput(ex.what());
  }
  auto trace = tsp::refine_batch(m, edges);
  write_text(out, dump(m.to_json()));
  if (!trace_path.empty()) write_text(trace_path, dump(trace.to_json()));
  return kOk;
}

int cmd_bezier(const std::string& in, const std::string& out) {
  tsp::TMesh m = load_mesh(in);
  label(m);
  tsp::BezierStats st;
  tsp::TMesh b = tsp::bezier_mesh(m, &st);
  auto j = b.to_json();
  ordered_json cont = ordered_json::object();
  for (auto [e, k] : tsp::continuity_map(b, b.extraordinary_nodes())) cont[std::to_string(e)] = k;
  j["continuity"] = cont;
  j["bezier"] = {{"iterations", st.iterations},
                 {"subdivided", st.subdivided},
                 {"malformed_elements", st.malformed_elements}};
  write_text(out, dump(j));
  return kOk;
}

int cmd_basis(const std::string& in, const std::string& points, const std::string& out) {
  tsp::TMesh m = load_mesh(in);
  label(m);
  tsp::Basis basis = tsp::assemble_basis(m);
  std::ifstream pin(points);
  if (!pin) throw BadInput("cannot open " + points);
  std::ostringstream csv;
  csv << "point,element,u,v,basis,value\n";
  std::string line;
  int lineno = 0, point = 0;
  std::vector<int> cand;
  while (std::getline(pin, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, c, rest;
    ls >> a >> b >> c;
    if (ls >> rest || a.rfind("elem:", 0) || b.rfind("u:", 0) || c.rfind("v:", 0))
      throw BadInput(points + ":" + std::to_string(lineno) + ": expected 'elem:<id> u:<u> v:<v>'");
    int q;
    double u, v;
    try {
      q = std::stoi(a.substr(5));
      u = std::stod(b.substr(2));
      v = std::stod(c.substr(2));
    } catch (const std::exception&) {
      throw BadInput(points + ":" + std::to_string(lineno) + ": bad number");
    }
    if (q < 0 || q >= m.num_elements() || !m.element(q).active)
      throw BadInput(points + ":" + std::to_string(lineno) + ": element " + std::to_string(q) +
                     " is not active");
    if (!(u >= 0 && u <= 1 && v >= 0 && v <= 1))
      throw BadInput(points + ":" + std::to_string(lineno) + ": u, v must lie in [0,1]");
    auto hp = tsp::element_point(m, q, u, v);
    basis.candidates(hp, cand);
    char buf[64];
    for (int f : cand) {
      double val = basis.eval(f, hp);
      if (val == 0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", val);
      csv << point << "," << q << "," << b.substr(2) << "," << c.substr(2) << "," << f << "," << buf
          << "\n";
    }
    ++point;
  }
  write_text(out, csv.str());
  return kOk;
}

int cmd_verify(const std::string& in, const std::string& trace_path, const std::string& out) {
  tsp::TMesh m = load_mesh(in);
  label(m);
  std::optional<tsp::RefineTrace> trace;
  if (!trace_path.empty()) {
    std::ifstream tin(trace_path);
    if (!tin) throw BadInput("cannot open " + trace_path);
    try {
      trace = tsp::RefineTrace::from_json(ordered_json::parse(tin));
    } catch (const std::exception& ex) {
      throw BadInput(trace_path + ": " + ex.what());
    }
  }
  auto report = tsp::verify_suite(m, trace ? &*trace : nullptr);
  // Timings vary from run to run; keep the file reproducible.
  for (auto& c : report["checks"]) c.erase("seconds");
  write_text(out, dump(report));
  return report["status"] == "pass" ? kOk : kViolation;
}

int cmd_svg(const std::string& in, const std::string& out, bool levels, bool di, bool ext) {
  tsp::TMesh m = load_mesh(in);
  if ((di || ext) && !m.labeled()) label(m);
  if (!m.has_positions()) throw BadInput(in + ": svg needs node positions");
  auto coloring = levels ? tsp::SvgColoring::Levels
                  : di   ? tsp::SvgColoring::Directions
                  : ext  ? tsp::SvgColoring::Extensions
                         : tsp::SvgColoring::Plain;
  write_text(out, tsp::render_svg(m, coloring));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"T-mesh refinement, Bezier extraction, T-spline basis and property checks"};
  app.require_subcommand(1);
  int code = kOk;

  std::string in, out, trace_path, points, kind = "grid";
  int p = 0, n = 4, k = 5;
  std::vector<std::string> marks;
  bool levels = false, di = false, ext = false;

  auto* gen = app.add_subcommand("gen", "write a sample initial mesh");
  gen->add_option("kind", kind, "grid | star | ring | twisted")->required();
  gen->add_option("--p", p, "odd degree")->default_val(1);
  gen->add_option("--n", n, "grid size, or sector size for star")->default_val(4);
  gen->add_option("--valence", k, "valence of the star center")->default_val(5);
  gen->add_option("-o", out, "output file");

  auto* check = app.add_subcommand("check", "validate an initial mesh and its labeling");
  check->add_option("mesh", in)->required();
  check->add_option("-o", out, "report file");

  auto* refine = app.add_subcommand("refine", "refine marked edges");
  refine->add_option("mesh", in)->required();
  refine->add_option("--p", p, "odd degree, stored in the mesh at first refine");
  refine->add_option("--mark", marks, "edge:<id> | near:<x>,<y> | curve:<x0>,<y0>:<x1>,<y1>")
      ->required();
  refine->add_option("-o", out, "output mesh")->required();
  refine->add_option("--trace", trace_path, "refinement trace output");

  auto* bezier = app.add_subcommand("bezier", "extract the Bezier mesh and continuity map");
  bezier->add_option("mesh", in)->required();
  bezier->add_option("-o", out, "output mesh")->required();

  auto* basis = app.add_subcommand("basis", "evaluate all basis functions at points");
  basis->add_option("mesh", in)->required();
  basis->add_option("--eval", points, "lines 'elem:<id> u:<u> v:<v>'")->required();
  basis->add_option("-o", out, "CSV output")->required();

  auto* verify = app.add_subcommand("verify", "run every property check");
  verify->add_option("mesh", in)->required();
  verify->add_option("--trace", trace_path, "trace written by refine");
  verify->add_option("-o", out, "report file");

  auto* svg = app.add_subcommand("svg", "draw the mesh");
  svg->add_option("mesh", in)->required();
  svg->add_option("-o", out, "SVG output")->required();
  auto* g = svg->add_option_group("coloring");
  g->add_flag("--levels", levels, "color edges by refinement level");
  g->add_flag("--di", di, "color edges by direction index");
  g->add_flag("--extensions", ext, "overlay T-node extensions");
  g->require_option(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (*gen) code = cmd_gen(kind, p, n, k, out);
    else if (*check) code = cmd_check(in, out);
    else if (*refine) code = cmd_refine(in, p, marks, out, trace_path);
    else if (*bezier) code = cmd_bezier(in, out);
    else if (*basis) code = cmd_basis(in, points, out);
    else if (*verify) code = cmd_verify(in, trace_path, out);
    else if (*svg) code = cmd_svg(in, out, levels, di, ext);
  } catch (const BadInput& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kBadInput;
  } catch (const std::exception& ex) {
    std::cerr << "failed: " << ex.what() << "\n";
    return kViolation;
  }
  return code;
}
