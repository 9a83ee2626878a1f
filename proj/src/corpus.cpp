#include "pseudocurve/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>

#include "pseudocurve/acs.hpp"
#include "pseudocurve/errors.hpp"
#include "pseudocurve/io.hpp"
#include "pseudocurve/modulus.hpp"
#include "pseudocurve/solver.hpp"

#ifndef PSEUDOCURVE_FIXTURE_DIR
#define PSEUDOCURVE_FIXTURE_DIR "fixtures"
#endif

namespace pseudocurve {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

cplx complex_of(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0};
  return {j.at(0).get<double>(), j.size() > 1 ? j.at(1).get<double>() : 0.0};
}

GridPtr grid_of(const json& in, int nr = 128, int nt = 256) {
  if (in.contains("grid")) {
    nr = in.at("grid").at(0).get<int>();
    nt = in.at("grid").at(1).get<int>();
  }
  return DiscGrid::make(nr, nt);
}

json measure_non_primitive(const json& in) {
  const double a = in.at("ellipse").at(0).get<double>(), b = in.at("ellipse").at(1).get<double>();
  const double scale = in.at("scale").get<double>(), shift = in.at("shift").get<double>();
  const int power = in.at("power").get<int>(), n = in.at("samples").get<int>();
  const cplx target = complex_of(in.at("target"));
  auto inside = [&](cplx z) { return std::norm(z.real() / a) + std::norm(z.imag() / b) < 1; };
  // u(z1) = u(z2) iff the affine images differ by a power-th root of unity.
  bool found = false;
  double best = 1e300, sep = 0, mismatch = 0;
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= n; ++k) {
      const cplx z1(-a + 2 * a * i / n, -b + 2 * b * k / n);
      if (!inside(z1)) continue;
      const cplx w1 = scale * z1 + shift;
      for (int m = 1; m < power; ++m) {
        const cplx z2 = (w1 * std::polar(1.0, 2 * M_PI * m / power) - shift) / scale;
        if (!inside(z2)) continue;
        found = true;
        const cplx u1 = std::pow(w1, power), u2 = std::pow(scale * z2 + shift, power);
        mismatch = std::max(mismatch, std::abs(u1 - u2) / std::abs(u1));
        if (std::abs(u1 - target) < best) {
          best = std::abs(u1 - target);
          sep = std::abs(z1 - z2);
        }
      }
    }
  return {{"overlap_found", found}, {"target_distance", best}, {"preimage_separation", sep}, {"relative_mismatch", mismatch}};
}

json measure_puiseux(const json& in) {
  const CurveGerm g = germ_from_json(in.at("curve"));
  const auto seq = puiseux_sequence(g);
  const auto [mu, v] = multiplicity(g);
  json tangent = json::array();
  for (const auto& c : v) tangent.push_back({format_rational(c.re), format_rational(c.im)});
  json stages = json::array();
  for (const auto& s : seq.stages) stages.push_back(to_json(s.germ));
  const auto& p = seq.type.exponents;
  return {{"multiplicity", mu},
          {"tangent", tangent},
          {"exponents", p},
          {"leading_exponents", std::vector<int>(p.begin(), p.begin() + std::min<std::size_t>(2, p.size()))},
          {"divisors", seq.type.divisors},
          {"cusp_index", cusp_index_formula(seq.type)},
          {"stages", stages}};
}

json measure_q_match(const json& in) {
  const QField q = j_to_q(structure_from_json(in.at("structure")));
  const QField expected = polynomial_q_from_json(in.at("expected_q"));
  std::mt19937_64 rng(in.value("seed", 0));
  std::uniform_real_distribution<double> u(-1, 1);
  const double radius = in.value("radius", 1.0);
  double dev = 0;
  for (int k = 0, n = in.value("points", 200); k < n; ++k) {
    ComplexVector w(q.n());
    for (int c = 0; c < q.n(); ++c) w(c) = radius / std::sqrt(2.0 * q.n()) * cplx(u(rng), u(rng));
    dev = std::max(dev, (q(w) - expected(w)).norm());
  }
  return {{"max_deviation", dev}};
}

json measure_j_at(const json& in) {
  const StructureField j = structure_from_json(in.at("structure"));
  RealVector x(j.dim());
  for (int k = 0; k < j.dim(); ++k) x(k) = in.at("point").at(k).get<double>();
  return {{"deviation_from_standard", (j(x) - standard_j(j.n())).norm()}};
}

json measure_cr_residual(const json& in) {
  int dim = 0;
  const auto f = map_from_json(in.at("map"), &dim);
  const auto g = grid_of(in);
  const auto res = cr_residual(structure_from_json(in.at("structure")), GridFunction::sample(g, dim, f));
  double lo = 0, hi = 1;
  if (in.contains("r_range")) {
    lo = in.at("r_range").at(0).get<double>();
    hi = in.at("r_range").at(1).get<double>();
  }
  double m = 0;
  for (int ir = 0; ir < g->n_radial(); ++ir) {
    const double r = g->radii()[ir];
    if (r < lo || r > hi) continue;
    for (int it = 0; it < g->n_angular(); ++it) m = std::max(m, std::abs(res.at(ir, it, 0)));
  }
  return {{"sup_residual", m}};
}

json measure_picard(const json& in) {
  int dim = 0;
  const auto f = map_from_json(in.at("map"), &dim);
  const auto g = grid_of(in);
  SolverOptions o;
  o.start_from_boundary = in.value("start_from_boundary", false);
  o.seed = in.value("seed", 0);
  const auto rep = picard_solve(structure_from_json(in.at("structure")), GridFunction::sample(g, dim, f), o);
  // The solver works in the rescaled frame u(eps z) / delta.
  const double d = rep.delta, e = rep.eps;
  double err = 0;
  std::vector<cplx> v(dim);
  for (int ir = 0; ir < g->n_radial(); ++ir)
    for (int it = 0; it < g->n_angular(); ++it) {
      f(e * g->point(ir, it), v.data());
      for (int c = 0; c < dim; ++c) err = std::max(err, std::abs(rep.solution.at(ir, it, c) - v[c] / d));
    }
  double max_ratio = 0;
  for (double r : rep.contraction_ratios) max_ratio = std::max(max_ratio, r);
  return {{"converged", rep.converged}, {"iterations", rep.iterations}, {"max_ratio", max_ratio},
          {"sup_error", err},           {"delta", d},                    {"residual", rep.final_residual}};
}

json measure_tangency_9_1(const json& in) {
  const int k = in.at("k").get<int>();
  const StructureField j = example_9_1(k);
  std::mt19937_64 rng(in.value("seed", 0));
  std::uniform_real_distribution<double> ux(0.05, 0.9), uy(-0.5, 0.5), un(-0.5, 0);
  const RealVector ey1{{0, 1, 0, 0}};
  double worst = 0;
  for (int s = 0, n = in.value("points", 50); s < n; ++s) {
    const double x1 = ux(rng), y1 = uy(rng);
    // M1 = {w2 = 0}: tangent plane spanned by d/dx1 and d/dy1.
    const RealMatrix a = j(RealVector{{un(rng), y1, 0, 0}});
    const RealVector ex1{{1, 0, 0, 0}};
    worst = std::max({worst, (a * ex1 - ey1).norm(), (a * ey1 + ex1).norm()});
    // M2 = {x2 = exp(-1/x1^k), y2 = 0} over x1 > 0.
    const double x2 = std::exp(-1 / std::pow(x1, k));
    const RealVector t{{1, 0, k * std::pow(x1, -k - 1.0) * x2, 0}};
    const RealMatrix b = j(RealVector{{x1, y1, x2, 0}});
    worst = std::max({worst, (b * t - ey1).norm(), (b * ey1 + t).norm()});
  }
  return {{"max_residual", worst}};
}

json measure_lipschitz(const json& in) {
  const StructureField j = structure_from_json(in.at("structure"));
  const auto rep = lipschitz_profile(j, Ball{RealVector::Zero(j.dim()), in.value("radius", 1.0)}, in.at("budget").get<long>(),
                                     in.value("seed", 0), in.value("coarsest", 1), in.value("finest", 16));
  return {{"estimate", rep.estimate}, {"super_lipschitz", rep.super_lipschitz}};
}

json measure_modulus_growth(const json& in) {
  int dim = 0;
  const auto f = map_from_json(in.at("map"), &dim);
  ModulusOptions o;
  o.pairs = in.at("pairs").get<long>();
  o.seed = in.value("seed", 0);
  o.coarsest = in.at("coarsest").get<int>();
  o.finest = in.at("finest").get<int>();
  const auto rep = modulus_report(GridFunction::sample(grid_of(in), dim, f), o);
  double inc = 1e300, lo = 1e300, hi = 0;
  for (std::size_t i = 0; i < rep.scales.size(); ++i) {
    if (i) inc = std::min(inc, rep.scales[i].lipschitz - rep.scales[i - 1].lipschitz);
    lo = std::min(lo, rep.scales[i].log_lipschitz);
    hi = std::max(hi, rep.scales[i].log_lipschitz);
  }
  return {{"min_lipschitz_increment", inc}, {"log_lipschitz_variation", (hi - lo) / lo}, {"scales", rep.scales.size()}};
}

json measure_intersection(const json& in) {
  json indices = json::array();
  // |delta| = mu1 mu2 exactly when the tangent lines differ.
  bool bound = true, transverse_rule = true, stable = true;
  for (const auto& p : in.at("pairs")) {
    const CurveGerm a = germ_from_json(p.at("a")), b = germ_from_json(p.at("b"));
    const auto res = intersection_index(a, b);
    indices.push_back(res.index);
    const auto [ma, va] = multiplicity(a);
    const auto [mb, vb] = multiplicity(b);
    const long mu = static_cast<long>(ma) * mb;
    const bool transverse = !(va[0] * vb[1] - va[1] * vb[0]).is_zero();
    bound = bound && std::abs(res.index) >= mu;
    transverse_rule = transverse_rule && ((std::abs(res.index) == mu) == transverse);
    for (double r : {2 * res.radius, 4 * res.radius}) stable = stable && intersection_index_at(a, b, r) == res.index;
  }
  return {{"indices", indices}, {"at_least_mu_product", bound}, {"mu_product_iff_transverse", transverse_rule}, {"radius_stable", stable}};
}

json measure_cusp_topological(const json& in) {
  const CurveGerm g = germ_from_json(in.at("curve"));
  const auto res = cusp_index_topological(g, structure_from_json(in.at("structure")), in.value("radius", 0.05),
                                          in.value("samples", 1024));
  return {{"kappa", res.kappa}, {"bennequin", res.bennequin}, {"formula", cusp_index_formula(characteristic_exponents(g))}};
}

json measure_wall_crossing(const json& in) {
  std::vector<PlanarMap> branches;
  for (const auto& b : in.at("branches")) branches.push_back(planar_map_from_json(b));
  const auto rep = wall_crossing_check(branches, in.at("r1").get<double>(), in.at("r2").get<double>(),
                                       in.at("delta_sum").get<int>(), in.value("samples", 1024));
  return {{"b_inner", rep.b_inner}, {"b_outer", rep.b_outer}, {"jump", rep.b_outer - rep.b_inner}, {"balanced", rep.balanced}};
}

json measure_genus(const json& in) {
  const auto res = genus_check(ledger_from_json(in.at("ledger")));
  return {{"genus_sum", *res.ledger.genus_sum}, {"balanced", res.balanced}, {"solved", res.solved}};
}

using Measure = json (*)(const json&);
const std::map<std::string, Measure>& measures() {
  static const std::map<std::string, Measure> m{
      {"non_primitive", measure_non_primitive},
      {"puiseux", measure_puiseux},
      {"q_match", measure_q_match},
      {"j_at", measure_j_at},
      {"cr_residual", measure_cr_residual},
      {"picard", measure_picard},
      {"tangency_9_1", measure_tangency_9_1},
      {"lipschitz", measure_lipschitz},
      {"modulus_growth", measure_modulus_growth},
      {"intersection", measure_intersection},
      {"cusp_topological", measure_cusp_topological},
      {"wall_crossing", measure_wall_crossing},
      {"genus", measure_genus},
  };
  return m;
}

bool compare(const std::string& op, const json& expected, const json& measured, double tol) {
  if (op == "equals") return expected == measured;
  if (op == "below") return measured.get<double>() < expected.get<double>();
  if (op == "at_least") return measured.get<double>() >= expected.get<double>();
  if (op == "approx") return std::abs(measured.get<double>() - expected.get<double>()) <= tol;
  if (op == "same_germs") {
    if (expected.size() != measured.size()) return false;
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (!germ_from_json(expected[i]).same_terms(germ_from_json(measured[i]))) return false;
    return true;
  }
  throw ParseError("unknown claim op '" + op + "'");
}

}  // namespace

bool FixtureReport::pass() const {
  return !claims.empty() && std::all_of(claims.begin(), claims.end(), [](const ClaimResult& c) { return c.pass; });
}

std::string fixture_dir() {
  if (const char* e = std::getenv("PSEUDOCURVE_FIXTURES")) return e;
  return PSEUDOCURVE_FIXTURE_DIR;
}

std::vector<std::string> fixture_ids() {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(fixture_dir(), ec))
    if (e.path().extension() == ".json") ids.push_back(e.path().stem().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

void validate_fixture(const json& f) {
  try {
    if (f.value("schema", 0) != 1) throw ParseError("fixture schema must be 1");
    if (!f.at("id").is_string() || !f.at("description").is_string()) throw ParseError("fixture needs id and description");
    if (!f.at("checks").is_array() || f.at("checks").empty()) throw ParseError("fixture needs checks");
    for (const auto& c : f.at("checks")) {
      const auto kind = c.at("kind").get<std::string>();
      if (!measures().count(kind)) throw ParseError("unknown check kind '" + kind + "'");
      if (!c.at("claims").is_array() || c.at("claims").empty()) throw ParseError("check '" + kind + "' has no claims");
      for (const auto& cl : c.at("claims")) {
        const auto prov = cl.at("provenance").get<std::string>();
        const bool ok = prov == "paper" || prov == "trivial" || (prov.rfind("derived:", 0) == 0 && prov.size() > 8);
        if (!ok) throw ParseError("claim '" + cl.at("id").get<std::string>() + "' has bad provenance '" + prov + "'");
        const auto op = cl.at("op").get<std::string>();
        if (op != "equals" && op != "below" && op != "at_least" && op != "approx" && op != "same_germs")
          throw ParseError("unknown claim op '" + op + "'");
        if (op == "approx" && !cl.contains("tol")) throw ParseError("approx claims need tol");
        cl.at("value");
      }
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad fixture: ") + e.what());
  }
}

json load_fixture(const std::string& id) {
  const fs::path p = fs::path(fixture_dir()) / (id + ".json");
  if (id.find('/') != std::string::npos || !fs::exists(p)) throw UnknownFixture("no fixture named '" + id + "'");
  json f = read_json_file(p.string());
  validate_fixture(f);
  if (f.at("id") != id) throw ParseError("fixture file " + p.string() + " declares id " + f.at("id").dump());
  return f;
}

FixtureReport run_fixture_json(const json& f) {
  validate_fixture(f);
  const auto t0 = std::chrono::steady_clock::now();
  FixtureReport rep{f.at("id"), f.at("description"), {}, 0};
  for (const auto& c : f.at("checks")) {
    const auto kind = c.at("kind").get<std::string>();
    json measured;
    std::string error;
    try {
      measured = measures().at(kind)(c.value("inputs", json::object()));
    } catch (const std::exception& e) {
      error = e.what();
    }
    for (const auto& cl : c.at("claims")) {
      ClaimResult r{kind, cl.at("id"), cl.at("op"), cl.at("provenance"), cl.at("value"), nullptr, false, error};
      if (error.empty()) {
        if (!measured.contains(r.id)) {
          r.note = "check does not measure '" + r.id + "'";
        } else {
          r.measured = measured.at(r.id);
          try {
            r.pass = compare(r.op, r.expected, r.measured, cl.value("tol", 0.0));
          } catch (const std::exception& e) {
            r.note = e.what();
          }
        }
      }
      rep.claims.push_back(std::move(r));
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

FixtureReport run_fixture(const std::string& id) { return run_fixture_json(load_fixture(id)); }

std::vector<FixtureReport> run_all_fixtures() {
  std::vector<FixtureReport> out;
  for (const auto& id : fixture_ids()) out.push_back(run_fixture(id));
  return out;
}

json to_json(const FixtureReport& r) {
  json claims = json::array();
  for (const auto& c : r.claims) {
    json j{{"check", c.kind}, {"id", c.id},         {"op", c.op},    {"provenance", c.provenance},
           {"expected", c.expected}, {"measured", c.measured}, {"pass", c.pass}};
    if (!c.note.empty()) j["note"] = c.note;
    claims.push_back(j);
  }
  return {{"schema", 1}, {"id", r.id}, {"description", r.description}, {"pass", r.pass()}, {"seconds", r.seconds}, {"claims", claims}};
}

GridFunction::PointMap map_from_json(const json& j, int* dim) {
  struct Term {
    cplx coef;
    int a, b, m;
  };
  std::vector<std::vector<Term>> comps;
  try {
    for (const auto& c : j.at("components")) {
      std::vector<Term> ts;
      for (const auto& t : c) {
        Term x{complex_of(t.at("coef")), t.value("z", 0), t.value("zbar", 0), t.value("log_abs2", 0)};
        if (x.a < 0 || x.b < 0 || x.m < 0) throw ParseError("map exponents must be nonnegative");
        ts.push_back(x);
      }
      comps.push_back(std::move(ts));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad map: ") + e.what());
  }
  if (comps.empty()) throw ParseError("map needs components");
  if (dim) *dim = static_cast<int>(comps.size());
  return [comps](cplx z, cplx* out) {
    const double l = z == 0.0 ? 0.0 : std::log(std::norm(z));
    for (std::size_t c = 0; c < comps.size(); ++c) {
      cplx s = 0;
      for (const auto& t : comps[c]) {
        if (t.m > 0 && z == 0.0) continue;
        cplx v = t.coef * std::pow(l, t.m);
        for (int i = 0; i < t.a; ++i) v *= z;
        for (int i = 0; i < t.b; ++i) v *= std::conj(z);
        s += v;
      }
      out[c] = s;
    }
  };
}

PlanarMap planar_map_from_json(const json& j) {
  try {
    std::vector<std::vector<cplx>> coeffs;
    for (const auto& c : j.at("coeffs")) {
      std::vector<cplx> cs;
      for (const auto& v : c) cs.push_back(complex_of(v));
      coeffs.push_back(std::move(cs));
    }
    return polynomial_map(std::move(coeffs), j.contains("center") ? complex_of(j.at("center")) : cplx(0), j.value("label", ""));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad planar map: ") + e.what());
  }
}

}  // namespace pseudocurve
