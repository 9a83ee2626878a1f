#include <doctest.h>

#include <cmath>

#include "pseudocurve/errors.hpp"
#include "pseudocurve/kernels.hpp"
#include "pseudocurve/topology.hpp"

using namespace pseudocurve;

namespace {

// Germ (a z^p + ..., b z^q + ...) from integer monomials.
CurveGerm germ(std::vector<std::pair<int, int>> first, std::vector<std::pair<int, int>> second) {
  int top = 2;
  for (auto [e, c] : first) top = std::max(top, e + 1);
  for (auto [e, c] : second) top = std::max(top, e + 1);
  auto build = [top](const std::vector<std::pair<int, int>>& t) {
    TruncatedSeries s(top);
    for (auto [e, c] : t) s.set(e, QComplex(mpq_class(c), mpq_class(0)));
    return s;
  };
  return CurveGerm({build(first), build(second)});
}

// Oracle: signed crossing count of a planar diagram. Project R^3 -> (x, y) and count
// crossings where a passes over b, with the right-hand sign rule.
int crossing_linking(const std::vector<kernels::Vec3>& a, const std::vector<kernels::Vec3>& b) {
  int sum = 0;
  const std::size_t na = a.size(), nb = b.size();
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      const auto &p1 = a[i], &p2 = a[(i + 1) % na], &q1 = b[j], &q2 = b[(j + 1) % nb];
      const double d1x = p2[0] - p1[0], d1y = p2[1] - p1[1], d2x = q2[0] - q1[0], d2y = q2[1] - q1[1];
      const double den = d1x * d2y - d1y * d2x;
      if (den == 0) continue;
      const double s = ((q1[0] - p1[0]) * d2y - (q1[1] - p1[1]) * d2x) / den;
      const double t = ((q1[0] - p1[0]) * d1y - (q1[1] - p1[1]) * d1x) / den;
      if (s < 0 || s >= 1 || t < 0 || t >= 1) continue;
      const double za = p1[2] + s * (p2[2] - p1[2]), zb = q1[2] + t * (q2[2] - q1[2]);
      if (za > zb) sum += den > 0 ? 1 : -1;  // a over b
    }
  return sum;
}

std::vector<kernels::Vec3> circle3(double cx, double cy, double cz, int axis, int n) {
  std::vector<kernels::Vec3> p(n);
  for (int k = 0; k < n; ++k) {
    const double t = 2 * M_PI * k / n, c = std::cos(t), s = std::sin(t);
    p[k] = axis == 2 ? kernels::Vec3{cx + c, cy + s, cz} : kernels::Vec3{cx + c, cy, cz + s};
  }
  return p;
}

}  // namespace

TEST_SUITE("topology") {

TEST_CASE("slices") {
  SUBCASE("(z, 0) at r = 1/2 is the circle (r e^{i theta}, 0)") {
    auto c = slice(germ({{1, 1}}, {}), 0.5, 256);
    REQUIRE(c.components.size() == 1);
    for (int k = 0; k < 256; ++k) {
      const auto& p = c.components[0].points[k];
      CHECK(std::abs(p[0] - 0.5 * std::cos(2 * M_PI * k / 256)) < 1e-12);
      CHECK(std::abs(p[1] - 0.5 * std::sin(2 * M_PI * k / 256)) < 1e-12);
      CHECK(p[2] == 0);
      CHECK(p[3] == 0);
    }
  }
  SUBCASE("(z^2, z^3) at r = 0.01 winds twice in the first coordinate") {
    auto c = slice(germ({{2, 1}}, {{3, 1}}), 0.01, 512);
    const auto& pts = c.components[0].points;
    double turn = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto& a = pts[k];
      const auto& b = pts[(k + 1) % pts.size()];
      turn += std::arg(std::complex<double>(b[0], b[1]) / std::complex<double>(a[0], a[1]));
      CHECK(std::abs(std::hypot(std::hypot(a[0], a[1]), std::hypot(a[2], a[3])) - 0.01) < 1e-10);
    }
    CHECK(std::round(turn / (2 * M_PI)) == 2);
  }
  SUBCASE("Hopf circles are r sqrt 2 apart") {
    auto c = combine({slice(germ({{1, 1}}, {}), 0.5, 256), slice(germ({}, {{1, 1}}), 0.5, 256)});
    // Chords of a 256-gon sit cos(pi / 256) inside the circle.
    CHECK(c.min_gap() == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-4));
  }
  SUBCASE("non-monotone rays are rejected") {
    // |u| along rays of (z - z^3, 0) peaks before reaching r = 0.5.
    auto u = polynomial_map({{0, 1, 0, -1}, {0}}, 0, "fold");
    CHECK_THROWS_AS(slice(u, 0.5, 64), TransversalityError);
  }
}

TEST_CASE("linking numbers") {
  const double r = 0.5;
  auto hopf = combine({slice(germ({{1, 1}}, {}), r, 256), slice(germ({}, {{1, 1}}), r, 256)});
  const auto& a = hopf.components[0];
  const auto& b = hopf.components[1];

  SUBCASE("the Hopf pair links +1 for every usable pole") {
    CHECK(linking(a, b, r) == 1);
    auto all = linking_by_pole(a, b, r);
    CHECK(all.size() == 8);
    for (double v : all) CHECK(std::abs(v - 1) < 1e-9);
  }
  SUBCASE("symmetric and antisymmetric under reversal") {
    CHECK(linking(b, a, r) == linking(a, b, r));
    SphereComponent rev = b;
    rev.orientation = -1;
    CHECK(linking(a, rev, r) == -linking(a, b, r));
  }
  SUBCASE("crossing-count oracle on a planar projection") {
    // Same sign convention as the Gauss sum: a Hopf link of round circles in R^3.
    auto x = circle3(0, 0, 0, 2, 200), y = circle3(1, 0, 0, 1, 200);
    const double g = kernels::gauss_linking_sum(x, y);
    CHECK(std::abs(g - crossing_linking(x, y)) < 1e-9);
    CHECK(std::abs(std::abs(g) - 1) < 1e-9);
  }
  SUBCASE("parallel complex lines do not link") {
    auto c = combine({slice(polynomial_map({{0, 1}, {0.2}}), r, 128), slice(polynomial_map({{0, 1}, {-0.2}}), r, 128)});
    CHECK(linking(c.components[0], c.components[1], r) == 0);
  }
}

TEST_CASE("intersection indices of germ pairs") {
  struct Pair {
    CurveGerm a, b;
    int expected;  // order of vanishing of one branch's equation along the other
    int mu_product;
    bool transverse;
  };
  std::vector<Pair> pairs{
      {germ({{1, 1}}, {}), germ({}, {{1, 1}}), 1, 1, true},
      {germ({{1, 1}}, {}), germ({{1, 1}}, {{2, 1}}), 2, 1, false},
      {germ({{2, 1}}, {{3, 1}}), germ({{1, 1}}, {}), 3, 2, false},
      {germ({{2, 1}}, {{3, 1}}), germ({}, {{1, 1}}), 2, 2, true},
      {germ({{2, 1}}, {{3, 1}}), germ({{2, 1}}, {{3, 2}}), 6, 4, false},
      {germ({{1, 1}}, {{3, 1}}), germ({{1, 1}}, {}), 3, 1, false},
  };
  for (const auto& p : pairs) {
    auto res = intersection_index(p.a, p.b);
    CHECK(res.index == p.expected);
    CHECK(res.index >= p.mu_product);
    CHECK((res.index == 1) == (p.transverse && p.mu_product == 1));
    // Smaller spheres bring tangent branches within the gap tolerance, so go outwards.
    for (double r : {res.radius, 2 * res.radius, 4 * res.radius}) CHECK(intersection_index_at(p.a, p.b, r) == p.expected);
    CHECK(intersection_index(p.b, p.a).index == p.expected);
  }
  CHECK_THROWS_AS(intersection_index(germ({{1, 1}}, {}), germ({{1, 1}}, {})), EqualError);
}

TEST_CASE("Bennequin indices of slices for J_st") {
  auto js = standard_structure(2);
  auto smooth = bennequin(slice(germ({{1, 1}}, {}), 0.05), js);
  CHECK(smooth.index == -1);
  CHECK(smooth.margin > 0.5);
  CHECK(bennequin(slice(germ({{2, 1}}, {{3, 1}}), 0.05), js).index == 1);
  CHECK(bennequin(slice(germ({{2, 1}}, {{5, 1}}), 0.05), js).index == 3);
  SUBCASE("invariant under refinement") {
    auto g = germ({{2, 1}}, {{5, 1}});
    CHECK(bennequin(slice(g, 0.05, 512), js).index == bennequin(slice(g, 0.05, 1024), js).index);
  }
  SUBCASE("pushoff of the planar circle links it -1") {
    auto c = slice(germ({{1, 1}}, {}), 0.5, 256);
    CHECK(bennequin(c, js).index == -1);
  }
}

TEST_CASE("cusp index: topological route equals the formula") {
  auto js = standard_structure(2);
  CHECK(cusp_index_topological(germ({{1, 1}}, {}), js).kappa == 0);
  CHECK(cusp_index_topological(germ({{2, 1}}, {{3, 1}}), js).kappa == 1);
  CHECK(cusp_index_topological(germ({{2, 1}}, {{5, 1}}), js).kappa == 2);
  CHECK(cusp_index_topological(germ({{3, 1}}, {{4, 1}}), js).kappa == 3);
}

TEST_CASE("wall crossing adds twice the intersections in the shell") {
  // Branch 1 is {w2 = 0}. The others are centred at their closest point to the origin, where
  // |u|^2 is convex in the parameter, so every ray crosses each sphere once.
  auto flat = polynomial_map({{0, 1}, {0}}, 0, "w2=0");
  SUBCASE("node: the line w2 = (w1 - 1/2)/2 meets it once at |w| = 1/2") {
    // u(z) = (z, (z - 1/2)/2); the closest point to 0 is z = 1/10.
    auto line = polynomial_map({{0, 1}, {-0.25, 0.5}}, 0.1, "node");
    auto rep = wall_crossing_check({flat, line}, 0.3, 0.8, 1);
    CHECK(rep.b_inner == -2);
    CHECK(rep.b_outer == 0);
    CHECK(rep.balanced);
  }
  SUBCASE("order-2 tangency at (1/2, 0)") {
    // u(z) = (1/2 + z, z^2 / 2); |u|^2 is convex with its minimum at the real root of x^3 + 2x + 1.
    double x = -0.5;
    for (int k = 0; k < 30; ++k) x -= (x * x * x + 2 * x + 1) / (3 * x * x + 2);
    auto tangent = polynomial_map({{0.5, 1}, {0, 0, 0.5}}, x, "tangent");
    auto rep = wall_crossing_check({flat, tangent}, 0.3, 0.8, 2);
    CHECK(rep.b_outer - rep.b_inner == 4);
    CHECK(rep.balanced);
  }
  SUBCASE("parallel branches: no jump") {
    auto parallel = polynomial_map({{0, 1}, {0.2}}, 0, "parallel");
    auto rep = wall_crossing_check({flat, parallel}, 0.3, 0.8, 0);
    CHECK(rep.b_outer == rep.b_inner);
    CHECK(rep.balanced);
  }
}

TEST_CASE("genus ledger") {
  // Plane curves of degree D: [M]^2 = D^2, c1[M] = 3D, g = (D-1)(D-2)/2 - delta - kappa.
  auto oracle = [](long deg, long delta, long kappa) { return (deg - 1) * (deg - 2) / 2 - delta - kappa; };
  struct Case {
    long deg, delta, kappa;
  };
  for (auto c : {Case{3, 0, 0}, Case{3, 0, 1}, Case{4, 3, 0}}) {
    GenusLedger l{c.deg * c.deg, 3 * c.deg, 1, c.delta, c.kappa, std::nullopt};
    auto res = genus_check(l);
    CHECK(res.solved == "genus_sum");
    CHECK(*res.ledger.genus_sum == oracle(c.deg, c.delta, c.kappa));
    CHECK(res.balanced);
    // Every other field can be recovered from the rest.
    for (int drop = 0; drop < 5; ++drop) {
      GenusLedger m = res.ledger;
      std::optional<long>* f[] = {&m.self_int_sq, &m.c1_pairing, &m.components_d, &m.delta_sum, &m.kappa_sum};
      const long keep = **f[drop];
      f[drop]->reset();
      auto back = genus_check(m);
      CHECK(back.balanced);
      const std::optional<long>* g[] = {&back.ledger.self_int_sq, &back.ledger.c1_pairing, &back.ledger.components_d,
                                        &back.ledger.delta_sum, &back.ledger.kappa_sum};
      CHECK(**g[drop] == keep);
    }
  }
  CHECK(genus_check({9, 9, 1, 0, 1, 0}).balanced);
  CHECK_FALSE(genus_check({9, 9, 1, 0, 1, 1}).balanced);
  CHECK_THROWS_AS(genus_check({9, std::nullopt, 1, 0, 1, std::nullopt}), UnderdeterminedError);
  CHECK_THROWS_AS(genus_check({9, 8, 1, 0, 1, std::nullopt}), ParityError);
  CHECK(local_invariants({germ({{2, 1}}, {{3, 1}})}) == std::pair<long, long>{0, 1});
  CHECK(local_invariants({germ({{1, 1}}, {}), germ({}, {{1, 1}}), germ({{1, 1}}, {{1, 1}})}) == std::pair<long, long>{3, 0});
}

TEST_CASE("JSON round trips") {
  auto c = slice(germ({{2, 1}}, {{3, 1}}), 0.05, 64);
  auto back = sphere_curve_from_json(to_json(c));
  CHECK(back.radius == c.radius);
  CHECK(back.components[0].points == c.components[0].points);
  GenusLedger l{16, 12, 1, 3, 0, std::nullopt};
  auto lb = ledger_from_json(to_json(l));
  CHECK(lb.self_int_sq == l.self_int_sq);
  CHECK_FALSE(lb.genus_sum.has_value());
  CHECK_THROWS_AS(ledger_from_json(nlohmann::json::parse(R"({"self_int_sq": "x"})")), ParseError);
  CHECK_THROWS_AS(sphere_curve_from_json(nlohmann::json::parse(R"({"radius": 1, "components": [{"points": [[2,0,0,0]]}]})")),
                  ParseError);
}

}  // TEST_SUITE

TEST_SUITE("slow") {

TEST_CASE("cusp index of (z^6, z^8 + z^11) is 19 by both routes") {
  CurveGerm g = germ({{6, 1}}, {{8, 1}, {11, 1}});
  auto res = cusp_index_topological(g, standard_structure(2), 0.05, 4096);
  MESSAGE("radius " << res.radius << ", Bennequin " << res.bennequin);
  CHECK(res.kappa == 19);
}

}  // TEST_SUITE
