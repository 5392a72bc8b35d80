#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "dhj/cli.hpp"
#include "support/fixtures.hpp"

using namespace dhj::testing;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "dhj");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dhj::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return data_path(std::string(name) + ".json"); }

}  // namespace

TEST_CASE("fw prints the potential") {
  const Run r = run({"fw", data("g4")});
  CHECK(r.code == 0);
  const json d = r.doc();
  CHECK(d["command"] == "fw");
  CHECK(d["schema_version"] == 1);
  CHECK(d["payload"]["potential"] == json::parse(R"({"1":1,"2":1,"3":0,"4":0})"));
  CHECK(d["diagnostics"].empty());
  CHECK(d["input_digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("validate reports the broken assumption with exit code 1") {
  const Run r = run({"validate", data("g4-broken")});
  CHECK(r.code == 1);
  const json e = r.doc()["payload"]["error"];
  CHECK(e["name"] == "assumption-violated");
  CHECK(e["context"]["report"]["assumption_2_3_holds"] == false);
  const Run ok = run({"validate", data("g4")});
  CHECK(ok.code == 0);
  CHECK(ok.doc()["payload"]["assumption_2_3_holds"] == true);
}

TEST_CASE("viscosity on G2 has zero errors") {
  const Run r = run({"viscosity", "--N-list", "5,10", data("g2")});
  CHECK(r.code == 0);
  CHECK(r.doc()["payload"]["errors"] == json::parse("[0, 0]"));
}

TEST_CASE("output is byte-identical across runs and keys are sorted") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"zero-map", data("r4")}, {"check", "--potential", data_path("g4-fw.json"), data("g4")},
        {"viscosity", "--N-list", "5,10,20,40", data("g4")}}) {
    const Run a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == a.doc().dump(2) + "\n");
  }
}

TEST_CASE("every command runs on a fixture") {
  const std::vector<std::vector<std::string>> commands{
      {"distances", data("r4")},
      {"zero-map", data("g4")},
      {"arborescences", "--root", "3", "--enumerate", data("g4")},
      {"meta-fw", data("g4")},
      {"quasipotential", "--cycle", "1", data("g4")},
      {"solve", "--lambda", "[1, 0]", data("g4")},
      {"minimal", data("rev3")},
      {"lax-oleinik", "--v0", "zero", data("rev3")},
      {"lax-oleinik", "--v0", data_path("g4-fw.json"), "--max-steps", "3", data("g4")},
      {"stationary", "--N", "2", data("g4")},
      {"lift", "--N", "2", data("g4")},
      {"reversible", data("rev3")},
      {"ring", "--spec", data_path("r4-ring.json")},
  };
  for (const auto& args : commands) {
    CAPTURE(args.front());
    const Run r = run(args);
    CHECK(r.code == 0);
    CHECK(r.doc()["command"] == args.front());
  }
}

TEST_CASE("command payloads") {
  json p = run({"arborescences", "--root", "3", "--enumerate", data("g4")}).doc()["payload"];
  CHECK(p["count"] == 2);
  CHECK(p["minimum"]["weight"] == 1);
  p = run({"meta-fw", data("g4")}).doc()["payload"];
  CHECK(p["lambda"] == json::parse("[1, 0]"));
  p = run({"quasipotential", "--cycle", "1", data("g4")}).doc()["payload"];
  CHECK(p["potential"] == json::parse(R"({"1":2,"2":2,"3":0,"4":0})"));
  p = run({"minimal", data("rev3")}).doc()["payload"];
  CHECK(p["potential"] == json::parse(R"({"1":0,"2":0,"3":1})"));
  p = run({"lax-oleinik", "--v0", "zero", data("rev3")}).doc()["payload"];
  CHECK(p["converged"] == true);
  CHECK(p["potential"] == json::parse(R"({"1":0,"2":0,"3":1})"));
  p = run({"check", "--potential", data_path("g4-fw.json"), data("g4")}).doc()["payload"];
  CHECK(p["is_solution"] == true);
  CHECK(p["face"] == "maximal");
  p = run({"reversible", data("rev3")}).doc()["payload"];
  CHECK(p["checks"]["all_pass"] == true);
  CHECK(p["potential"] == json::parse(R"({"1":0,"2":0,"3":1})"));
  p = run({"lift", "--N", "2", data("g4")}).doc()["payload"];
  CHECK(p["eulerian"] == true);
  CHECK(p["total_variation"].get<double>() <= 1e-12);
}

TEST_CASE("domain errors carry their names") {
  Run r = run({"solve", "--lambda", "[3, 0]", data("g4")});
  CHECK(r.code == 1);
  CHECK(r.doc()["payload"]["error"]["name"] == "infeasible-lambda");
  CHECK(r.doc()["payload"]["error"]["context"]["j"] == 1);
  r = run({"reversible", data("r4")});
  CHECK(r.code == 1);
  CHECK(r.doc()["payload"]["error"]["name"] == "gradient-condition-violated");
  r = run({"reversible", data("g4")});
  CHECK(r.doc()["payload"]["error"]["name"] == "non-reversible-edge-set");
  r = run({"arborescences", "--root", "1", "--enumerate", "--max-size", "3", data("g4")});
  CHECK(r.code == 1);
  CHECK(r.doc()["payload"]["error"]["name"] == "size-cap-exceeded");
  r = run({"quasipotential", "--cycle", "7", data("g4")});
  CHECK(r.doc()["payload"]["error"]["name"] == "invalid-cycle-index");
  r = run({"viscosity", "--N-list", "10,5", data("g4")});
  CHECK(r.doc()["payload"]["error"]["name"] == "invalid-argument");
  r = run({"stationary", "--N", "1000", data("g4")});
  CHECK(r.doc()["payload"]["error"]["name"] == "underflow-regime");
  r = run({"arborescences", "--root", "9", data("g4")});
  CHECK(r.doc()["payload"]["error"]["name"] == "unknown-vertex");
  r = run({"fw", data_path("r4-ring.json")});
  CHECK(r.code == 1);
  CHECK(r.doc()["payload"]["error"]["name"] == "malformed-json");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"fw"}).code == 2);
  CHECK(run({"solve", data("g4")}).code == 2);
  CHECK(run({"fw", "/nonexistent/graph.json"}).code == 2);
  CHECK(run({"--format", "csv", "fw", data("g4")}).code == 2);
  CHECK(run({"--format", "xml", "fw", data("g4")}).code == 2);
  CHECK(run({"--tolerance", "-1", "fw", data("g4")}).code == 2);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("viscosity") != std::string::npos);
}

TEST_CASE("csv output for tabular commands") {
  Run r = run({"--format", "csv", "distances", data("g4")});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("from,1,2,3,4\n1,0,0,1,1\n", 0) == 0);
  r = run({"stationary", "--N", "1", "--format", "csv", data("g2")});
  CHECK(r.out == "vertex,pi\na,0.5\nb,0.5\n");
  r = run({"--format", "csv", "viscosity", "--N-list", "5,10", data("g2")});
  CHECK(r.out == "N,error,envelope,method\n5,0,0,linear_solve\n10,0,0,linear_solve\n");
}

TEST_CASE("tolerance from the flag and the environment") {
  // With tolerance 1.5 the edge (2,3) counts as zero, giving vertex 2 two zero out-edges.
  const std::string path = data("g4");
  CHECK(run({"--tolerance", "1.5", "validate", path}).code == 1);
  setenv("DHJ_TOLERANCE", "1.5", 1);
  CHECK(run({"validate", path}).code == 1);
  CHECK(run({"--tolerance", "1e-9", "validate", path}).code == 0);
  setenv("DHJ_TOLERANCE", "abc", 1);
  CHECK(run({"validate", path}).code == 2);
  unsetenv("DHJ_TOLERANCE");
  CHECK(run({"validate", path}).code == 0);
}
