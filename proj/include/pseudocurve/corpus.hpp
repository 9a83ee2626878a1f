#pragma once

// Executable fixtures for the worked examples. Each fixture is a JSON file
//   {"schema": 1, "id": ..., "description": ..., "checks": [{"kind": ..., "inputs": {...},
//    "claims": [{"id": ..., "op": "equals|below|at_least|approx|same_germs", "value": ...,
//                "tol": ..., "provenance": "paper|trivial|derived:<oracle>"}]}]}
// A check computes a JSON object of measured values; each claim compares one key of it.

#include <json.hpp>
#include <string>
#include <vector>

#include "pseudocurve/grid.hpp"
#include "pseudocurve/topology.hpp"

namespace pseudocurve {

struct ClaimResult {
  std::string kind;  // check kind
  std::string id;
  std::string op;
  std::string provenance;
  nlohmann::json expected, measured;
  bool pass = false;
  std::string note;  // error text when the check itself failed
};

struct FixtureReport {
  std::string id, description;
  std::vector<ClaimResult> claims;
  double seconds = 0;
  bool pass() const;
};

// $PSEUDOCURVE_FIXTURES if set, else the in-repo directory.
std::string fixture_dir();
std::vector<std::string> fixture_ids();
// Throws UnknownFixture, or ParseError for malformed files (including bad provenance tags).
nlohmann::json load_fixture(const std::string& id);
void validate_fixture(const nlohmann::json& f);

FixtureReport run_fixture(const std::string& id);
FixtureReport run_fixture_json(const nlohmann::json& f);
std::vector<FixtureReport> run_all_fixtures();

nlohmann::json to_json(const FixtureReport& r);

// {"components": [[{"coef": [re, im], "z": a, "zbar": b, "log_abs2": m}, ...], ...]}:
// sums of coef z^a conj(z)^b (ln|z|^2)^m, with ln|0|^2 terms taken as 0.
GridFunction::PointMap map_from_json(const nlohmann::json& j, int* dim);
// {"coeffs": [[[re, im], ...], [...]], "center": [re, im], "label": ...}
PlanarMap planar_map_from_json(const nlohmann::json& j);

}  // namespace pseudocurve
