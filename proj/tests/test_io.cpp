#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "tspline/marks.hpp"
#include "tspline/meshgen.hpp"
#include "tspline/svg.hpp"

using namespace tsp;
namespace fs = std::filesystem;

TEST_CASE("mark specs") {
  TMesh m = TMesh::from_initial(grid_document(4, 4, 1));
  ensure_labels(m);
  CHECK(resolve_mark(m, "edge:3") == std::vector<int>{3});
  CHECK_THROWS_AS(resolve_mark(m, "edge:9999"), MarkError);
  CHECK_THROWS_AS(resolve_mark(m, "edge:x"), MarkError);
  CHECK_THROWS_AS(resolve_mark(m, "nowhere:1"), MarkError);
  CHECK_THROWS_AS(resolve_mark(m, "near:1"), MarkError);
  CHECK_THROWS_AS(resolve_mark(m, "curve:0,0"), MarkError);

  // nearest midpoint to (1, 2.4) is the vertical edge x=1, y in [2,3]
  auto near = resolve_mark(m, "near:1.05,2.4");
  REQUIRE(near.size() == 1);
  CHECK(near[0] == m.edge_between(11, 16));

  // horizontal line y=1.5 crosses the five vertical edges of that row
  auto cut = resolve_mark(m, "curve:-1,1.5:5,1.5");
  CHECK(cut.size() == 5);
  for (int e : cut) CHECK(m.edge(e).x0 == m.edge(e).x1);

  tsp::subdiv(m, 3);
  CHECK_THROWS_AS(resolve_mark(m, "edge:3"), MarkError);
  auto both = resolve_marks(m, {"edge:4", "edge:5", "edge:4"});
  CHECK(both == std::vector<int>{4, 5});
}

TEST_CASE("svg has one polyline per active edge") {
  TMesh m = TMesh::from_initial(star_document(5, 3, 3));
  gen::refine_randomly(m, 5, 2);
  for (auto c : {SvgColoring::Plain, SvgColoring::Levels, SvgColoring::Directions,
                 SvgColoring::Extensions}) {
    std::string s = render_svg(m, c);
    std::regex poly("<polyline id=\"e([0-9]+)\"");
    int count = 0;
    for (auto it = std::sregex_iterator(s.begin(), s.end(), poly); it != std::sregex_iterator(); ++it) {
      CHECK(m.edge(std::stoi((*it)[1])).active);
      ++count;
    }
    CHECK(count == m.count_active_edges());
    CHECK(s.find("<svg") != std::string::npos);
  }
}

#ifdef TSPLINE_CLI
namespace {

int run(const std::string& args) {
  int rc = std::system((std::string(TSPLINE_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("command line workflow and exit codes") {
  fs::path dir = fs::temp_directory_path() / "tspline_cli_test";
  fs::create_directories(dir);
  auto f = [&](const char* name) { return (dir / name).string(); };

  CHECK(run("gen grid --n 4 --p 1 -o " + f("g.json")) == 0);
  CHECK(run("check " + f("g.json")) == 0);
  CHECK(run("refine " + f("g.json") + " --p 1 --mark edge:5 --mark near:2,2 -o " + f("r.json") +
            " --trace " + f("t.json")) == 0);
  CHECK(run("refine " + f("r.json") + " --p 3 --mark edge:0 -o " + f("x.json")) == 2);
  CHECK(run("refine " + f("g.json") + " --p 2 --mark edge:0 -o " + f("x.json")) == 2);
  CHECK(run("refine " + f("g.json") + " --mark edge:99999 -o " + f("x.json")) == 2);
  CHECK(run("verify " + f("r.json") + " --trace " + f("t.json") + " -o " + f("v1.json")) == 0);
  CHECK(run("verify " + f("r.json") + " --trace " + f("t.json") + " -o " + f("v2.json")) == 0);
  CHECK(slurp(f("v1.json")) == slurp(f("v2.json")));
  CHECK(run("bezier " + f("r.json") + " -o " + f("b.json")) == 0);
  CHECK(slurp(f("b.json")).find("\"continuity\"") != std::string::npos);
  CHECK(run("svg " + f("r.json") + " --levels -o " + f("r.svg")) == 0);
  CHECK(run("svg " + f("r.json") + " --levels --di -o " + f("r.svg")) == 2);
  CHECK(run("verify " + f("missing.json")) == 2);
  CHECK(run("nosuchcommand") == 2);

  {
    std::ofstream pts(f("pts.txt"));
    pts << "elem:0 u:0.5 v:0.5\n# comment\nelem:3 u:0 v:1\n";
  }
  CHECK(run("basis " + f("g.json") + " --eval " + f("pts.txt") + " -o " + f("vals.csv")) == 0);
  std::string csv = slurp(f("vals.csv"));
  // p=1: four hats are nonzero at an element center; they sum to 1
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  double sum0 = 0;
  int rows0 = 0;
  while (std::getline(lines, line))
    if (line.rfind("0,", 0) == 0) {
      sum0 += std::stod(line.substr(line.rfind(',') + 1));
      ++rows0;
    }
  CHECK(rows0 == 4);
  CHECK(sum0 == doctest::Approx(1.0));
  {
    std::ofstream pts(f("bad.txt"));
    pts << "elem:0 u:2 v:0.5\n";
  }
  CHECK(run("basis " + f("g.json") + " --eval " + f("bad.txt") + " -o " + f("vals.csv")) == 2);
  fs::remove_all(dir);
}
#endif
