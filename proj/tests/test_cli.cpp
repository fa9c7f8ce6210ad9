#include <cmath>
#include <string>

#include "cli_runner.hpp"
#include "doctest.h"

using nlohmann::json;
using test::TempDir;

namespace {

const char* kEllipsoidConfig = R"({
  "surface": {"type": "ellipsoid", "parameters": {"a": 3, "b": 2, "c": 1}, "branch": {"chart": "global"}},
  "trace": {"starts": [[1.0, 0.7, 0.5]], "random": 2, "arc_length": 2},
  "ridges": {"lines": 8, "samples": 64},
  "rotation": {"alphas": [0.6, 1.0], "lambdas": [2.5], "iterates": 30},
  "regimes": {"trajectories": 2, "arc_length": 1.5},
  "cansec": {"start": [1.0, 0.7, 0.5], "arc_length": 1.5},
  "integrability": {"grid": 3}
})";

std::string args(const std::string& command, const test::fs::path& config, const test::fs::path& out,
                 const std::string& extra = "") {
  return command + " --config '" + config.string() + "' --out '" + out.string() + "' " + extra;
}

}  // namespace

TEST_CASE("catalog lists the built-in types") {
  TempDir tmp;
  const auto r = test::run_cli("catalog", tmp.path());
  REQUIRE(r.code == 0);
  const json j = json::parse(r.stdout_text);
  CHECK(j.size() == 7);
  for (const auto& e : j) CHECK(e["example"].contains("type"));
}

TEST_CASE("configuration errors exit with code 1 and name the field") {
  TempDir tmp;
  test::write_text(tmp / "bad.json", R"({"surface": {"parameters": {"a": 3}}, "trace": {"starts": [[1, 1, 1]]}})");
  const auto r = test::run_cli(args("trace", tmp / "bad.json", tmp / "out"), tmp.path());
  CHECK(r.code == 1);
  CHECK(r.stderr_text.find("type") != std::string::npos);

  test::write_text(tmp / "notjson.json", "{ surface: ");
  CHECK(test::run_cli(args("ridges", tmp / "notjson.json", tmp / "out"), tmp.path()).code == 1);
  CHECK(test::run_cli("trace --config /nonexistent/config.json", tmp.path()).code == 1);
  CHECK(test::run_cli("frobnicate", tmp.path()).code == 1);
  CHECK(test::run_cli("--help", tmp.path()).code == 0);

  test::write_text(tmp / "wrongtype.json",
                   R"({"surface": {"type": "ellipsoid", "parameters": {"a": 3, "b": 2, "c": 1}}, "trace": {"arc_length": "long"}})");
  const auto w = test::run_cli(args("trace", tmp / "wrongtype.json", tmp / "out"), tmp.path());
  CHECK(w.code == 1);
  CHECK(w.stderr_text.find("arc_length") != std::string::npos);

  test::write_text(tmp / "torus.json", R"({"surface": {"type": "torus", "parameters": {"R": 3, "rho": 1}}})");
  const auto q = test::run_cli(args("rotation", tmp / "torus.json", tmp / "out"), tmp.path());
  CHECK(q.code == 1);
}

TEST_CASE("a trace into an umbilic exits with code 2 and flags the partial file") {
  TempDir tmp;
  test::write_text(tmp / "umb.json", R"({
    "surface": {"type": "ellipsoid", "parameters": {"a": 3, "b": 2, "c": 1}, "branch": {"chart": "global"}},
    "trace": {"starts": [[3.1414, 0.0002, 0.3]], "arc_length": 3}})");
  const auto r = test::run_cli(args("trace", tmp / "umb.json", tmp / "out"), tmp.path());
  CHECK(r.code == 2);
  const json j = json::parse(test::slurp(tmp / "out" / "trace_0.json"));
  CHECK(j["partial"] == true);
  CHECK(j["summary"]["termination"].get<std::string>().find("umbilic") != std::string::npos);
}

TEST_CASE("an ellipsoid trace carries a conserved integral column") {
  TempDir tmp;
  test::write_text(tmp / "t.json", R"({
    "surface": {"type": "ellipsoid", "parameters": {"a": 3, "b": 2, "c": 1}},
    "trace": {"starts": [[2.5, 1.5, 0.7853981633974483]], "arc_length": 2}})");
  REQUIRE(test::run_cli(args("trace", tmp / "t.json", tmp / "out"), tmp.path()).code == 0);
  std::istringstream csv(test::slurp(tmp / "out" / "trace_0.csv"));
  std::string line;
  std::getline(csv, line);
  REQUIRE(line.rfind("s,t,u,v,alpha,x,y,z,quadric_integral", 0) == 0);
  const double expected = 0.5 / 2.5 + 0.5 / 1.5;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream cells(line);
    std::string cell;
    for (int i = 0; i < 9; ++i) std::getline(cells, cell, ',');
    CHECK(std::abs(std::stod(cell) - expected) < 1e-8 * expected);
    ++rows;
  }
  CHECK(rows > 10);
  const json j = json::parse(test::slurp(tmp / "out" / "trace_0.json"));
  CHECK(j["drift"][0]["max_rel_drift"].get<double>() < 1e-8);
}

TEST_CASE("every command is byte-stable and records its metadata") {
  TempDir tmp;
  test::write_text(tmp / "e.json", kEllipsoidConfig);
  for (const char* cmd : {"trace", "ridges", "rotation", "regimes", "cansec", "integrability"}) {
    CAPTURE(cmd);
    const auto a = tmp / (std::string(cmd) + "_a"), b = tmp / (std::string(cmd) + "_b");
    REQUIRE(test::run_cli(args(cmd, tmp / "e.json", a, "--seed 11"), tmp.path()).code == 0);
    REQUIRE(test::run_cli(args(cmd, tmp / "e.json", b, "--seed 11 --jobs 2"), tmp.path()).code == 0);
    const auto sa = test::snapshot(a), sb = test::snapshot(b);
    REQUIRE(!sa.empty());
    CHECK(sa == sb);
    for (const auto& [name, text] : sa) {
      if (name.size() < 5 || name.substr(name.size() - 5) != ".json") continue;
      CAPTURE(name);
      const json j = json::parse(text);
      REQUIRE(j.contains("metadata"));
      CHECK(j["metadata"]["seed"] == 11);
      CHECK(j["metadata"]["command"] == cmd);
      CHECK(j["metadata"].contains("config_hash"));
      CHECK(j["metadata"].contains("version"));
      CHECK(j["metadata"]["rel_tol"].is_number());
    }
  }
  // A different seed moves the random trace starts.
  const auto c = tmp / "trace_c";
  REQUIRE(test::run_cli(args("trace", tmp / "e.json", c, "--seed 12"), tmp.path()).code == 0);
  CHECK(test::slurp(c / "trace_1.csv") != test::slurp(tmp / "trace_a" / "trace_1.csv"));
  CHECK(test::slurp(c / "trace_0.csv") == test::slurp(tmp / "trace_a" / "trace_0.csv"));
}

TEST_CASE("tolerance flags override the config") {
  TempDir tmp;
  test::write_text(tmp / "e.json", kEllipsoidConfig);
  REQUIRE(test::run_cli(args("cansec", tmp / "e.json", tmp / "o", "--rel-tol 1e-9"), tmp.path()).code == 0);
  const json j = json::parse(test::slurp(tmp / "o" / "cansec.json"));
  CHECK(j["metadata"]["rel_tol"].get<double>() == 1e-9);
  CHECK(test::run_cli(args("cansec", tmp / "e.json", tmp / "o", "--jobs 0"), tmp.path()).code == 1);
}

TEST_CASE("ridges report the ellipsoid catalog") {
  TempDir tmp;
  test::write_text(tmp / "e.json", kEllipsoidConfig);
  REQUIRE(test::run_cli(args("ridges", tmp / "e.json", tmp / "o"), tmp.path()).code == 0);
  const json j = json::parse(test::slurp(tmp / "o" / "ridges.json"));
  std::map<std::string, std::string> kinds;
  for (const auto& e : j["catalog"]) kinds[e["plane"].get<std::string>() + " " + e["foliation"].get<std::string>()] = e["kind"];
  CHECK(kinds.size() == 4);
  CHECK(kinds["x=0 P1"] == "zigzag");
  CHECK(kinds["z=0 P2"] == "zigzag");
  CHECK(kinds["y=0 P1"] == "beak-to-beak");
  CHECK(kinds["y=0 P2"] == "beak-to-beak");
}

TEST_CASE("rotation reports rho tan alpha as an invariant column") {
  TempDir tmp;
  test::write_text(tmp / "e.json", kEllipsoidConfig);
  REQUIRE(test::run_cli(args("rotation", tmp / "e.json", tmp / "o"), tmp.path()).code == 0);
  const json j = json::parse(test::slurp(tmp / "o" / "rotation.json"));
  REQUIRE(j["falpha"].size() == 2);
  const double c0 = j["falpha"][0]["rho_tan_alpha"], c1 = j["falpha"][1]["rho_tan_alpha"];
  CHECK(std::abs(c0 - c1) < 1e-9 * c0);
}

TEST_CASE("regime and rotation bundles match the committed goldens") {
  for (const char* name : {"regimes_ellipsoid", "regimes_one_sheet", "regimes_two_sheet", "rotation_ellipsoid"}) {
    CAPTURE(name);
    TempDir tmp;
    const test::fs::path golden = test::fs::path(DARBOUX_GOLDEN_DIR) / name;
    const std::string cmd = std::string(name).substr(0, std::string(name).find('_'));
    REQUIRE(test::run_cli(args(cmd, golden / "config.json", tmp / "o", "--seed 7"), tmp.path()).code == 0);
    CHECK(test::bundle_distance(golden, tmp / "o") < 1e-9);
  }
}
