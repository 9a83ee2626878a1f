#pragma once

// JSON forms of germs, singularity types and Puiseux sequences (all schema 1).
//
// Curve file: {"schema": 1, "truncation": N, "components": [[{"exp": k, "re": "p/q", "im": "p/q"}, ...], ...]}

#include <json.hpp>
#include <string>

#include "pseudocurve/singularity.hpp"

namespace pseudocurve {

nlohmann::json to_json(const TruncatedSeries& s);
nlohmann::json to_json(const CurveGerm& g);
nlohmann::json to_json(const SingularityType& t);
nlohmann::json to_json(const PuiseuxSequence& p);

// Missing "truncation" means one past the largest exponent (polynomial input). A truncation
// override, when positive, replaces the file's value.
CurveGerm germ_from_json(const nlohmann::json& j, int truncation_override = 0);
CurveGerm load_germ(const std::string& path, int truncation_override = 0);
SingularityType type_from_json(const nlohmann::json& j);

// "type://p0,p1,..." or a plain comma list.
SingularityType parse_type_uri(const std::string& s);

nlohmann::json read_json_file(const std::string& path);

}  // namespace pseudocurve
