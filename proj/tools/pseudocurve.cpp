// Command-line front end. Results go to stdout as JSON (schema 1); --out also writes them to a
// directory. Exit codes: 0 success, 1 computation failure or failed check, 2 usage/parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pseudocurve/acs.hpp"
#include "pseudocurve/corpus.hpp"
#include "pseudocurve/errors.hpp"
#include "pseudocurve/io.hpp"
#include "pseudocurve/solver.hpp"
#include "pseudocurve/topology.hpp"

using namespace pseudocurve;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string grid = "128x256";
  double tol = 1e-6;
  int truncation = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool json_errors = false;
};

std::pair<int, int> parse_grid(const std::string& s) {
  int nr = 0, nt = 0;
  char x = 0, extra = 0;
  std::istringstream in(s);
  if (!(in >> nr >> x >> nt) || (x != 'x' && x != 'X') || (in >> extra) || nr < 2 || nt < 4)
    throw ParseError("--grid expects NRxNT, got '" + s + "'");
  return {nr, nt};
}

void emit(const Globals& g, const std::string& name, const json& j) {
  std::cout << j.dump(2) << "\n";
  if (g.out.empty()) return;
  fs::create_directories(g.out);
  std::ofstream(fs::path(g.out) / (name + ".json")) << j.dump(2) << "\n";
}

void emit_grid(const Globals& g, const std::string& name, const GridFunction& f) {
  if (g.out.empty()) return;
  fs::create_directories(g.out);
  write_grid_csv((fs::path(g.out) / (name + ".csv")).string(), f);
}

bool is_type_uri(const std::string& s) { return s.rfind("type://", 0) == 0; }

// Default realization vectors: v0 = e1, every later v_i = e2.
CurveGerm realize_default(const SingularityType& t, int truncation) {
  std::vector<QVector> v(t.exponents.size(), QVector{QComplex(0), QComplex(1)});
  v[0] = QVector{QComplex(1), QComplex(0)};
  return realize_type(t, v, truncation);
}

CurveGerm germ_arg(const std::string& s, const Globals& g) {
  if (is_type_uri(s)) return realize_default(parse_type_uri(s), g.truncation);
  return load_germ(s, g.truncation);
}

// A curve argument is a germ file, a type URI, or a sliced sphere curve file.
SphereCurve sphere_arg(const std::string& s, double radius, int samples, const Globals& g) {
  if (!is_type_uri(s)) {
    json j = read_json_file(s);
    if (j.contains("radius")) return sphere_curve_from_json(j);
    return slice(germ_from_json(j, g.truncation), radius, samples);
  }
  return slice(germ_arg(s, g), radius, samples);
}

StructureField structure_arg(const std::string& path) {
  if (path.empty()) return standard_structure(2);
  return load_structure(path);
}

GridFunction grid_arg(const std::string& path, const Globals& g) {
  if (fs::path(path).extension() == ".json") {
    const auto [nr, nt] = parse_grid(g.grid);
    int dim = 0;
    auto f = map_from_json(read_json_file(path), &dim);
    return GridFunction::sample(DiscGrid::make(nr, nt), dim, f);
  }
  return read_grid_csv(path);
}

QVector parse_vector(const std::string& s) {
  QVector v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      v.emplace_back(parse_rational(item));
    } else {
      v.emplace_back(parse_rational(item.substr(0, colon)), parse_rational(item.substr(colon + 1)));
    }
  }
  return v;
}

std::vector<cplx> parse_w0(const std::string& s) {
  std::vector<cplx> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        out.emplace_back(std::stod(item), 0.0);
      } else {
        out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
      }
    } catch (const std::exception&) {
      throw ParseError("--w0 expects comma-separated re or re:im values, got '" + s + "'");
    }
  }
  return out;
}

int report_error(const Globals& g, const std::string& kind, const std::string& what, int code) {
  if (g.json_errors) {
    std::cerr << json{{"schema", 1}, {"error", kind}, {"message", what}, {"exit_code", code}}.dump() << "\n";
  } else {
    std::cerr << "pseudocurve: " << kind << ": " << what << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  CLI::App app{"Singular pseudoholomorphic curve toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--grid", g.grid, "Disc grid NRxNT for sampled inputs")->capture_default_str();
  app.add_option("--tol", g.tol, "Solver increment tolerance")->capture_default_str();
  app.add_option("--truncation", g.truncation, "Override the truncation order of germ inputs");
  app.add_option("--seed", g.seed, "Seed for sampling estimators")->capture_default_str();
  app.add_option("--out", g.out, "Also write outputs into this directory");
  app.add_flag("--json-errors", g.json_errors, "Machine-readable errors on stderr");

  int code = 0;
  std::string curve_a, curve_b, structure, reference, ledger, fixture, vectors, w0 = "0,0";
  double radius = 0.05;
  int samples = 1024, nu = 1;
  bool topological = false, all = false, from_boundary = false, no_rescale = false;

  auto* puiseux = app.add_subcommand("puiseux", "Characteristic exponents and Puiseux stages of a germ");
  puiseux->add_option("curve", curve_a, "Curve file")->required();
  puiseux->callback([&] { emit(g, "puiseux", to_json(puiseux_sequence(germ_arg(curve_a, g)))); });

  auto* cusp = app.add_subcommand("cusp-index", "Cusp index from the exponents, or topologically");
  cusp->add_option("curve", curve_a, "Curve file or type://p0,p1,...")->required();
  cusp->add_flag("--topological", topological, "Use the Bennequin index of a sphere slice");
  cusp->add_option("--structure", structure, "Structure spec (default J_st)");
  cusp->add_option("--radius", radius, "Largest slicing radius")->capture_default_str();
  cusp->add_option("--samples", samples, "Points per slice")->capture_default_str();
  cusp->callback([&] {
    json out{{"schema", 1}};
    if (is_type_uri(curve_a) && !topological) {
      const auto t = parse_type_uri(curve_a);
      out["type"] = to_json(t);
      out["cusp_index"] = cusp_index_formula(t);
      out["route"] = "formula";
    } else {
      const CurveGerm germ = germ_arg(curve_a, g);
      const auto t = characteristic_exponents(germ);
      out["type"] = to_json(t);
      out["cusp_index"] = cusp_index_formula(t);
      out["route"] = "formula";
      if (topological) {
        const auto res = cusp_index_topological(germ, structure_arg(structure), radius, samples);
        out["cusp_index"] = res.kappa;
        out["bennequin"] = res.bennequin;
        out["radius"] = res.radius;
        out["route"] = "topological";
      }
    }
    emit(g, "cusp-index", out);
  });

  auto* realize = app.add_subcommand("realize-type", "A germ with the given characteristic exponents");
  realize->add_option("type", curve_a, "type://p0,p1,...")->required();
  realize->add_option("--vectors", vectors, "v0;v1;... with coordinates re or re:im as p/q (default e1;e2;e2;...)");
  realize->callback([&] {
    const auto t = parse_type_uri(curve_a);
    if (vectors.empty()) {
      emit(g, "realize-type", to_json(realize_default(t, g.truncation)));
      return;
    }
    std::vector<QVector> vs;
    std::stringstream ss(vectors);
    std::string item;
    while (std::getline(ss, item, ';')) vs.push_back(parse_vector(item));
    emit(g, "realize-type", to_json(realize_type(t, vs, g.truncation)));
  });

  auto* validate = app.add_subcommand("validate-type", "Check an exponent list; exit 1 when it is not a type");
  validate->add_option("type", curve_a, "type://p0,p1,... or p0,p1,...")->required();
  validate->callback([&] {
    std::vector<int> ex;
    std::string body = is_type_uri(curve_a) ? curve_a.substr(7) : curve_a;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        ex.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ParseError("bad exponent '" + item + "'");
      }
    }
    const auto v = validate_type(ex);
    json out{{"schema", 1}, {"exponents", ex}, {"valid", v.type.has_value()}};
    if (v.type) out["type"] = to_json(*v.type);
    else out["violated"] = v.violated;
    emit(g, "validate-type", out);
    if (!v.type) code = 1;
  });

  auto* solve = app.add_subcommand("solve", "Picard iteration for a J-holomorphic disc with given boundary data");
  solve->add_option("--structure", structure, "Structure spec")->required();
  solve->add_option("--reference", reference, "Reference map: grid CSV, or map JSON sampled on --grid")->required();
  solve->add_flag("--start-from-boundary", from_boundary, "Start from the Cauchy extension of the boundary values");
  solve->add_flag("--no-rescale", no_rescale, "Skip the dilation to a small Lipschitz constant");
  solve->callback([&] {
    SolverOptions o;
    o.tol = g.tol;
    o.seed = g.seed;
    o.start_from_boundary = from_boundary;
    o.auto_rescale = !no_rescale;
    const auto rep = picard_solve(structure_arg(structure), grid_arg(reference, g), o);
    emit(g, "solve", to_json(rep));
    emit_grid(g, "solution", rep.solution);
    if (!rep.converged) code = 1;
  });

  auto* perturb = app.add_subcommand("perturb", "Perturb a cusp to u0 + z^nu w with w(0) = w0");
  perturb->add_option("--structure", structure, "Structure spec")->required();
  perturb->add_option("--reference", reference, "u0: grid CSV, or map JSON sampled on --grid")->required();
  perturb->add_option("--nu", nu, "Power of z")->capture_default_str();
  perturb->add_option("--w0", w0, "w(0) as comma-separated re or re:im")->capture_default_str();
  perturb->callback([&] {
    SolverOptions o;
    o.tol = g.tol;
    o.seed = g.seed;
    const auto rep = perturb_cusp(structure_arg(structure), grid_arg(reference, g), nu, parse_w0(w0), o);
    json j = to_json(rep);
    j["immersion_margin"] = immersion_margin(rep.solution);
    emit(g, "perturb", j);
    emit_grid(g, "solution", rep.solution);
    if (!rep.converged) code = 1;
  });

  auto* link = app.add_subcommand("linking", "Linking number of two curves on a sphere");
  link->add_option("a", curve_a, "Curve, type URI or sphere curve file")->required();
  link->add_option("b", curve_b, "Curve, type URI or sphere curve file")->required();
  link->add_option("--radius", radius, "Sphere radius for germ inputs")->capture_default_str();
  link->add_option("--samples", samples, "Points per slice")->capture_default_str();
  link->callback([&] {
    const auto a = sphere_arg(curve_a, radius, samples, g), b = sphere_arg(curve_b, radius, samples, g);
    if (a.components.size() != 1 || b.components.size() != 1) throw ParseError("linking takes single-component curves");
    if (std::abs(a.radius - b.radius) > 1e-12 * a.radius) throw DomainError("curves lie on different spheres");
    const auto both = combine({a, b});
    emit(g, "linking", {{"schema", 1},
                        {"linking", linking(a.components[0], b.components[0], a.radius)},
                        {"by_pole", linking_by_pole(a.components[0], b.components[0], a.radius)},
                        {"radius", a.radius},
                        {"gap", both.min_gap()}});
  });

  auto* inter = app.add_subcommand("intersection-index", "Intersection index of two germs at the origin");
  inter->add_option("a", curve_a, "Curve file or type URI")->required();
  inter->add_option("b", curve_b, "Curve file or type URI")->required();
  inter->add_option("--radius", radius, "Largest slicing radius")->capture_default_str();
  inter->add_option("--samples", samples, "Points per slice")->capture_default_str();
  inter->callback([&] {
    const auto res = intersection_index(germ_arg(curve_a, g), germ_arg(curve_b, g), radius, samples);
    emit(g, "intersection-index", {{"schema", 1}, {"index", res.index}, {"radius", res.radius}, {"gap", res.gap}});
  });

  auto* ben = app.add_subcommand("bennequin", "Bennequin index of a sphere curve");
  ben->add_option("curve", curve_a, "Curve, type URI or sphere curve file")->required();
  ben->add_option("--structure", structure, "Structure spec (default J_st)");
  ben->add_option("--radius", radius, "Sphere radius for germ inputs")->capture_default_str();
  ben->add_option("--samples", samples, "Points per slice")->capture_default_str();
  ben->callback([&] {
    const auto c = sphere_arg(curve_a, radius, samples, g);
    const auto res = bennequin(c, structure_arg(structure));
    emit(g, "bennequin", {{"schema", 1}, {"bennequin", res.index}, {"value", res.value}, {"eps", res.eps},
                          {"margin", res.margin}, {"radius", c.radius}});
    emit(g, "slice", to_json(c));
  });

  auto* genus = app.add_subcommand("genus", "Solve or verify the genus ledger; exit 1 when it does not balance");
  genus->add_option("--ledger", ledger, "Ledger JSON")->required();
  genus->callback([&] {
    const auto res = genus_check(ledger_from_json(read_json_file(ledger)));
    json out = to_json(res.ledger);
    out["balanced"] = res.balanced;
    out["solved"] = res.solved;
    emit(g, "genus", out);
    if (!res.balanced) code = 1;
  });

  auto* verify = app.add_subcommand("verify", "Run worked-example fixtures; exit 0 iff all pass");
  verify->add_option("fixture", fixture, "Fixture id");
  verify->add_flag("--all", all, "Run every fixture");
  verify->callback([&] {
    if (all == !fixture.empty()) throw ParseError("verify takes a fixture id or --all");
    json out = json::array();
    bool pass = true;
    for (const auto& id : all ? fixture_ids() : std::vector<std::string>{fixture}) {
      const auto rep = run_fixture(id);
      pass = pass && rep.pass();
      out.push_back(to_json(rep));
    }
    emit(g, "verify", {{"schema", 1}, {"pass", pass}, {"fixtures", out}});
    if (!pass) code = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(g, "UsageError", e.what(), 2);
  } catch (const Error& e) {
    return report_error(g, e.kind(), e.what(), e.usage() ? 2 : 1);
  } catch (const std::exception& e) {
    return report_error(g, "Error", e.what(), 1);
  }
  return code;
}
