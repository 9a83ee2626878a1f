#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "pseudocurve/grid.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("pseudocurve_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const char* bin = std::getenv("PSEUDOCURVE_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "PSEUDOCURVE_BIN is not set");
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string(bin) + " " + args + " 2>" + err.string();
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int status = ::pclose(p);
  std::ifstream e(err);
  std::string errs((std::istreambuf_iterator<char>(e)), std::istreambuf_iterator<char>());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, errs};
}

std::string write(const std::string& name, const json& j) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << j.dump();
  return p.string();
}

json curve(std::vector<std::vector<std::pair<int, std::string>>> comps) {
  json cs = json::array();
  int top = 2;
  for (const auto& c : comps) {
    json terms = json::array();
    for (const auto& [e, re] : c) {
      terms.push_back({{"exp", e}, {"re", re}, {"im", "0"}});
      top = std::max(top, e + 1);
    }
    cs.push_back(terms);
  }
  return {{"schema", 1}, {"truncation", top}, {"components", cs}};
}

json strip_seconds(json j) {
  for (auto& f : j["fixtures"]) f.erase("seconds");
  return j;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("puiseux on the worked example") {
  auto r = run("puiseux " + write("ex12.json", curve({{{6, "1"}}, {{8, "1"}, {11, "1"}}})));
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["type"]["exponents"] == json::array({6, 8, 11}));
  CHECK(j["type"]["divisors"] == json::array({6, 2, 1}));
  CHECK(j["cusp_index"] == 19);
  CHECK(j["stages"].size() == 3);
}

TEST_CASE("cusp index routes") {
  auto r = run("cusp-index type://2,3");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["cusp_index"] == 1);
  r = run("cusp-index type://2,5 --topological");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["cusp_index"] == 2);
  CHECK(json::parse(r.out)["bennequin"] == 3);
  CHECK(run("cusp-index type://4,6").code == 2);
}

TEST_CASE("realize, validate and read back") {
  auto r = run("realize-type type://4,6,7 --truncation 12");
  REQUIRE(r.code == 0);
  const std::string file = write("realized.json", json::parse(r.out));
  auto p = run("puiseux " + file);
  REQUIRE(p.code == 0);
  CHECK(json::parse(p.out)["type"]["exponents"] == json::array({4, 6, 7}));
  r = run("realize-type type://2,3 --vectors '1,0;0,1:1'");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["components"][1][0]["im"] == "1");
  CHECK(run("realize-type type://2,3 --vectors '1,0;1,1'").code == 2);  // not orthogonal to v0
  CHECK(run("validate-type 2,3").code == 0);
  auto bad = run("validate-type type://4,6");
  CHECK(bad.code == 1);
  CHECK(json::parse(bad.out)["valid"] == false);
}

TEST_CASE("topology commands") {
  const auto a = write("line1.json", curve({{{1, "1"}}, {}}));
  const auto b = write("line2.json", curve({{}, {{1, "1"}}}));
  const auto c = write("cusp.json", curve({{{2, "1"}}, {{3, "1"}}}));
  auto r = run("linking " + a + " " + b + " --radius 0.5");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["linking"] == 1);
  r = run("intersection-index " + c + " " + a);
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["index"] == 3);
  CHECK(run("intersection-index " + a + " " + a).code == 1);

  SUBCASE("bennequin output slices feed back into linking") {
    const fs::path out = scratch() / "ben";
    r = run("bennequin " + a + " --out " + out.string());
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(out / "slice.json"));
    REQUIRE(fs::exists(out / "bennequin.json"));
    std::ifstream in(out / "bennequin.json");
    CHECK(json::parse(in)["bennequin"] == -1);
    auto self = run("linking " + (out / "slice.json").string() + " " + (out / "slice.json").string());
    CHECK(self.code == 1);  // a curve meets itself
  }
}

TEST_CASE("genus ledger") {
  auto r = run("genus --ledger " + write("cubic.json", json{{"schema", 1}, {"self_int_sq", 9}, {"c1_pairing", 9}, {"components_d", 1},
                                                                   {"delta_sum", 0}, {"kappa_sum", 1}}));
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["genus_sum"] == 0);
  CHECK(j["solved"] == "genus_sum");
  CHECK(run("genus --ledger " + write("bad.json", json{{"self_int_sq", 9}, {"c1_pairing", 9}, {"components_d", 1}, {"delta_sum", 0},
                                                           {"kappa_sum", 1}, {"genus_sum", 1}})).code == 1);
  CHECK(run("genus --ledger " + write("under.json", json{{"self_int_sq", 9}})).code == 2);
}

TEST_CASE("solve and perturb on small grids") {
  const auto st = write("std.json", json{{"schema", 1}, {"builtin", "standard"}});
  const auto map = write("cube.json", json{{"components", {{{{"coef", {1, 0}}, {"z", 3}}}, {{{"coef", {0.5, 0}}, {"z", 1}}}}}});
  const fs::path out = scratch() / "solve";
  auto r = run("solve --structure " + st + " --reference " + map + " --grid 32x64 --out " + out.string());
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["converged"] == true);
  CHECK(j["iterations"] == 1);
  REQUIRE(fs::exists(out / "solution.csv"));
  auto sol = pseudocurve::read_grid_csv((out / "solution.csv").string());
  CHECK(sol.n_radial() == 32);
  // The emitted grid is accepted back as a reference.
  r = run("solve --structure " + st + " --reference " + (out / "solution.csv").string());
  CHECK(r.code == 0);

  const auto cusp = write("cusp_map.json", json{{"components", {{{{"coef", {1, 0}}, {"z", 2}}}, {{{"coef", {1, 0}}, {"z", 3}}}}}});
  r = run("perturb --structure " + st + " --reference " + cusp + " --grid 32x64 --nu 1 --w0 0,0.1");
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["converged"] == true);
  CHECK(j["immersion_margin"].get<double>() > 1e-3);
  CHECK(run("perturb --structure " + st + " --reference " + cusp + " --w0 0,x").code == 2);

  SUBCASE("divergence exits 1") {
    const auto q = write("strong.json", json::parse(R"({"q_matrix_polynomials": {"n": 2, "entries": [
        {"row": 0, "col": 1, "terms": [{"coef": [0.9, 0], "wbar": [0, 1]}]},
        {"row": 1, "col": 0, "terms": [{"coef": [0.9, 0], "wbar": [1, 0]}]}]}})"));
    const auto big = write("big.json", json{{"components", {{{{"coef", {3, 0}}, {"z", 1}}}, {{{"coef", {3, 0}}, {"z", 1}}}}}});
    auto d = run("--json-errors solve --structure " + q + " --reference " + big + " --grid 32x64 --no-rescale");
    CHECK(d.code == 1);
    CHECK(json::parse(d.err)["exit_code"] == 1);
  }
}

TEST_CASE("verify") {
  auto one = run("verify ex_1_2_puiseux");
  REQUIRE(one.code == 0);
  CHECK(json::parse(one.out)["pass"] == true);
  auto a = run("verify --all");
  auto b = run("verify --all --seed 0");
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK(strip_seconds(json::parse(a.out)) == strip_seconds(json::parse(b.out)));
  CHECK(json::parse(a.out)["fixtures"].size() == 10);
}

TEST_CASE("usage errors") {
  auto r = run("--json-errors verify no_such_fixture");
  CHECK(r.code == 2);
  auto e = json::parse(r.err);
  CHECK(e["error"] == "UnknownFixture");
  CHECK(run("").code == 2);
  CHECK(run("puiseux").code == 2);
  CHECK(run("verify").code == 2);
  const auto st = write("std2.json", json{{"builtin", "standard"}});
  const auto map = write("lin.json", json{{"components", {{{{"coef", {1, 0}}, {"z", 1}}}, {{{"coef", {0, 0}}}}}}});
  CHECK(run("solve --structure " + st + " --reference " + map + " --grid 32x64").code == 0);
  auto g = run("--json-errors solve --structure " + st + " --reference " + map + " --grid 12by4");
  CHECK(g.code == 2);
  CHECK(g.err.find("--grid") != std::string::npos);
  CHECK(run("--help").code == 0);
}

}  // TEST_SUITE
