#include <doctest.h>

#include <map>
#include <set>

#include "pseudocurve/corpus.hpp"
#include "pseudocurve/errors.hpp"
#include "pseudocurve/io.hpp"

using namespace pseudocurve;
using nlohmann::json;

TEST_SUITE("corpus") {

TEST_CASE("fixture files validate and carry provenance on every claim") {
  const auto ids = fixture_ids();
  CHECK(ids.size() == 10);
  for (const auto& id : ids) {
    CAPTURE(id);
    json f = load_fixture(id);
    for (const auto& c : f["checks"])
      for (const auto& cl : c["claims"]) CHECK(cl.contains("provenance"));
  }
}

TEST_CASE("every paper claim lives in exactly one fixture") {
  // (fixture, check kind, claim) triples that must be tagged paper; none may repeat elsewhere.
  const std::set<std::string> required{
      "ex_1_1_non_primitive/non_primitive/overlap_found", "ex_1_1_non_primitive/non_primitive/target_distance",
      "ex_1_2_puiseux/puiseux/exponents",                 "ex_1_2_puiseux/puiseux/divisors",
      "ex_1_2_puiseux/puiseux/stages",                    "ex_2_3_pde/q_match/max_deviation",
      "ex_2_3_pde/cr_residual/sup_residual",              "ex_8_6_twelvefold/puiseux/leading_exponents",
      "ex_9_1_tangency/lipschitz/super_lipschitz",        "ex_9_2_regularity/modulus_growth/log_lipschitz_variation",
      "ex_9_2_regularity/cr_residual/sup_residual",       "ex_9_2_regularity/j_at/deviation_from_standard",
      "thm_b_intersections/intersection/at_least_mu_product", "bennequin_cusp_index/cusp_topological/bennequin",
  };
  std::map<std::string, int> seen;
  for (const auto& id : fixture_ids()) {
    json f = load_fixture(id);
    for (const auto& c : f["checks"])
      for (const auto& cl : c["claims"])
        if (cl["provenance"] == "paper") ++seen[id + "/" + c["kind"].get<std::string>() + "/" + cl["id"].get<std::string>()];
  }
  for (const auto& r : required) {
    CAPTURE(r);
    CHECK(seen[r] == 1);
  }
  // Paper values must not be duplicated across fixtures under another name either.
  std::map<std::string, std::set<std::string>> by_value;
  for (const auto& id : fixture_ids()) {
    json f = load_fixture(id);
    for (const auto& c : f["checks"])
      for (const auto& cl : c["claims"])
        if (cl["provenance"] == "paper" && cl["value"].is_array()) by_value[cl["value"].dump()].insert(id);
  }
  for (const auto& [v, where] : by_value) {
    CAPTURE(v);
    CHECK(where.size() == 1);
  }
}

TEST_CASE("worked examples pass") {
  for (const auto& id : fixture_ids()) {
    auto rep = run_fixture(id);
    CAPTURE(id);
    for (const auto& c : rep.claims) {
      CAPTURE(c.id);
      CAPTURE(c.measured.dump());
      CAPTURE(c.note);
      CHECK(c.pass);
    }
    MESSAGE(id << ": " << rep.seconds << " s");
    CHECK(rep.pass());
  }
}

TEST_CASE("reports name the measured values") {
  auto rep = run_fixture("ex_1_2_puiseux");
  json j = to_json(rep);
  CHECK(j["pass"] == true);
  bool saw = false;
  for (const auto& c : j["claims"])
    if (c["id"] == "exponents") {
      CHECK(c["measured"] == json::array({6, 8, 11}));
      CHECK(c["provenance"] == "paper");
      saw = true;
    }
  CHECK(saw);
}

TEST_CASE("failures are reported, not hidden") {
  json f = load_fixture("thm_d_genus");
  f["checks"][0]["claims"][0]["value"] = 7;
  auto rep = run_fixture_json(f);
  CHECK_FALSE(rep.pass());
  CHECK_FALSE(rep.claims[0].pass);
  CHECK(rep.claims[0].measured == 1);

  // A check that throws fails all of its claims with the error text.
  f = load_fixture("thm_d_genus");
  f["checks"][0]["inputs"]["ledger"]["c1_pairing"] = nullptr;
  f["checks"][0]["inputs"]["ledger"]["delta_sum"] = nullptr;
  rep = run_fixture_json(f);
  CHECK_FALSE(rep.claims[0].pass);
  CHECK(rep.claims[0].note.find("unknown") != std::string::npos);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(run_fixture("no_such_fixture"), UnknownFixture);
  CHECK_THROWS_AS(run_fixture("../fixtures/ex_1_2_puiseux"), UnknownFixture);
  json f = load_fixture("thm_d_genus");
  f["checks"][0]["claims"][0]["provenance"] = "folklore";
  CHECK_THROWS_AS(validate_fixture(f), ParseError);
  f = load_fixture("thm_d_genus");
  f["checks"][0]["kind"] = "astrology";
  CHECK_THROWS_AS(validate_fixture(f), ParseError);
  f = load_fixture("thm_d_genus");
  f["checks"][0]["claims"][0]["op"] = "approx";
  CHECK_THROWS_AS(validate_fixture(f), ParseError);
}

TEST_CASE("curve files and type URIs") {
  auto g = germ_from_json(json::parse(R"({"schema": 1, "truncation": 20, "components": [
      [{"exp": 6, "re": "1", "im": "0"}], [{"exp": 8, "re": "1/2", "im": "0"}, {"exp": 11, "re": "0", "im": "-3/7"}]]})"));
  CHECK(g.order() == 20);
  CHECK(g.components[1].coeff(11) == QComplex(0, mpq_class(-3, 7)));
  CHECK(germ_from_json(to_json(g)).same_terms(g));
  CHECK(germ_from_json(to_json(g)).order() == 20);
  CHECK_THROWS_AS(germ_from_json(json::parse(R"({"components": [[{"exp": 1, "re": "0.5"}], []]})")), ParseError);
  CHECK_THROWS_AS(germ_from_json(json::parse(R"({"components": [[{"exp": 0, "re": "1"}], [{"exp": 1, "re": "1"}]]})")),
                  ValuationError);
  CHECK_THROWS_AS(germ_from_json(json::parse(R"({"components": [[{"exp": 1, "re": "1"}]]})")), ParseError);
  CHECK(parse_type_uri("type://6,8,11").exponents == std::vector<int>{6, 8, 11});
  CHECK(parse_type_uri("2,3").divisors == std::vector<int>{2, 1});
  CHECK_THROWS_AS(parse_type_uri("type://2,x"), ParseError);
  CHECK_THROWS_AS(parse_type_uri("type://4,6"), ParseError);
}

}  // TEST_SUITE
