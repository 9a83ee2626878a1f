#include "pseudocurve/io.hpp"

#include <fstream>
#include <sstream>

#include "pseudocurve/errors.hpp"

namespace pseudocurve {

using nlohmann::json;

namespace {

json qvector_json(const QVector& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back({{"re", format_rational(c.re)}, {"im", format_rational(c.im)}});
  return out;
}

mpq_class rational_field(const json& t, const char* key) {
  if (!t.contains(key)) return 0;
  const auto& v = t.at(key);
  if (v.is_number_integer()) return mpq_class(v.get<long>());
  if (!v.is_string()) throw ParseError(std::string("coefficient field '") + key + "' must be a \"p/q\" string");
  return parse_rational(v.get<std::string>());
}

}  // namespace

json to_json(const TruncatedSeries& s) {
  json terms = json::array();
  for (const auto& [k, c] : s.terms())
    terms.push_back({{"exp", k}, {"re", format_rational(c.re)}, {"im", format_rational(c.im)}});
  return terms;
}

json to_json(const CurveGerm& g) {
  json comps = json::array();
  for (const auto& c : g.components) comps.push_back(to_json(c));
  return {{"schema", 1}, {"truncation", g.order()}, {"components", comps}};
}

json to_json(const SingularityType& t) {
  return {{"exponents", t.exponents}, {"divisors", t.divisors}};
}

json to_json(const PuiseuxSequence& p) {
  json stages = json::array();
  for (const auto& s : p.stages)
    stages.push_back({{"divisor", s.divisor}, {"exponent", s.exponent}, {"leading", qvector_json(s.leading)}, {"germ", to_json(s.germ)}});
  return {{"schema", 1},
          {"type", to_json(p.type)},
          {"cusp_index", cusp_index_formula(p.type)},
          {"stages", stages},
          {"reparam", to_json(p.reparam)},
          {"reparam_truncation", p.reparam.order()}};
}

CurveGerm germ_from_json(const json& j, int truncation_override) {
  try {
    if (!j.is_object()) throw ParseError("curve file must be a JSON object");
    if (j.contains("schema") && j.at("schema") != 1) throw ParseError("unsupported curve schema");
    const auto& comps = j.at("components");
    if (!comps.is_array() || comps.size() < 2) throw ParseError("a curve needs at least two components");
    int top = 0;
    for (const auto& c : comps)
      for (const auto& t : c) {
        const int e = t.at("exp").get<int>();
        if (e < 0) throw ParseError("negative exponent " + std::to_string(e));
        top = std::max(top, e + 1);
      }
    int n = j.contains("truncation") ? j.at("truncation").get<int>() : top;
    if (truncation_override > 0) n = truncation_override;
    if (n < 1) throw ParseError("truncation must be positive");
    std::vector<TruncatedSeries> out;
    for (const auto& c : comps) {
      if (!c.is_array()) throw ParseError("each component must be a list of terms");
      TruncatedSeries s(n);
      for (const auto& t : c) {
        const int e = t.at("exp").get<int>();
        if (e >= n) continue;  // beyond the stated truncation
        QComplex v(rational_field(t, "re"), rational_field(t, "im"));
        s.set(e, s.coeff(e) + v);
      }
      out.push_back(std::move(s));
    }
    CurveGerm g(std::move(out));
    g.check();
    return g;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad curve file: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

CurveGerm load_germ(const std::string& path, int truncation_override) {
  return germ_from_json(read_json_file(path), truncation_override);
}

SingularityType type_from_json(const json& j) {
  try {
    const json& e = j.is_object() ? j.at("exponents") : j;
    return make_type(e.get<std::vector<int>>());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad singularity type: ") + e.what());
  }
}

SingularityType parse_type_uri(const std::string& s) {
  std::string body = s;
  const std::string scheme = "type://";
  if (body.rfind(scheme, 0) == 0) body = body.substr(scheme.size());
  std::vector<int> ex;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != item.size()) throw ParseError("bad exponent '" + item + "' in " + s);
    ex.push_back(v);
  }
  return make_type(ex);
}

}  // namespace pseudocurve
