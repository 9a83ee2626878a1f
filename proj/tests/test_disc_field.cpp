#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pseudocurve/errors.hpp"
#include "pseudocurve/modulus.hpp"
#include "pseudocurve/operators.hpp"

using namespace pseudocurve;

namespace {

GridPtr grid128() {
  static GridPtr g = DiscGrid::make(128, 256);
  return g;
}

GridFunction scalar(GridPtr g, std::function<cplx(cplx)> f) {
  return GridFunction::sample(g, 1, [&](cplx z, cplx* out) { *out = f(z); });
}

double max_diff(const GridFunction& a, std::function<cplx(cplx)> f, double r_lo = 0, double r_hi = 2) {
  double m = 0;
  const auto& g = *a.grid();
  for (int ir = 0; ir < g.n_radial(); ++ir) {
    const double r = g.radii()[ir];
    if (r < r_lo || r > r_hi) continue;
    for (int it = 0; it < g.n_angular(); ++it) m = std::max(m, std::abs(a.at(ir, it, 0) - f(g.point(ir, it))));
  }
  return m;
}

cplx zlog(cplx z) { return z * z * std::log(std::norm(z)); }

}  // namespace

TEST_SUITE("disc_field") {

TEST_CASE("grid layout") {
  auto g = grid128();
  CHECK(g->panels() == 8);
  CHECK(g->radii().back() == 1.0);
  CHECK(g->breaks()[1] == std::ldexp(1.0, -6));
  for (int i = 1; i < g->n_radial(); ++i) CHECK(g->radii()[i] > g->radii()[i - 1]);
  CHECK_THROWS_AS(DiscGrid::make(4, 256), GridTooCoarse);
  CHECK_THROWS_AS(DiscGrid::make(128, 8), GridTooCoarse);
  CHECK_THROWS_AS(DiscGrid::make(128, 100), GridTooCoarse);
  // area quadrature: integral of |z|^2 over the disc is pi/2
  double s = 0;
  for (int ir = 0; ir < g->n_radial(); ++ir) s += g->area_weight(ir) * g->n_angular() * g->radii()[ir] * g->radii()[ir];
  CHECK(s == doctest::Approx(std::numbers::pi / 2).epsilon(1e-13));
}

TEST_CASE("Wirtinger derivatives") {
  auto g = grid128();
  auto w = wirtinger(scalar(g, [](cplx z) { return z * z; }));
  CHECK(max_diff(w.dz, [](cplx z) { return 2.0 * z; }) < 1e-10);
  CHECK(max_diff(w.dzbar, [](cplx) { return cplx(0); }) < 1e-10);
  auto w2 = wirtinger(scalar(g, [](cplx z) { return std::conj(z); }));
  CHECK(max_diff(w2.dzbar, [](cplx) { return cplx(1); }) < 1e-10);
  CHECK(max_diff(w2.dz, [](cplx) { return cplx(0); }) < 1e-10);
  // The logarithm is resolved everywhere except inside the innermost panel, where a
  // polynomial cannot follow r^2 ln r; there the error is bounded but not small.
  auto w3 = wirtinger(scalar(g, zlog));
  const double b0 = g->breaks()[1] * 1.001;
  CHECK(max_diff(w3.dzbar, [](cplx z) { return z * z / std::conj(z); }, b0) < 1e-11);
  CHECK(max_diff(w3.dz, [](cplx z) { return 2.0 * z * std::log(std::norm(z)) + z; }, b0) < 1e-11);
  CHECK(max_diff(w3.dzbar, [](cplx z) { return z * z / std::conj(z); }) < 2e-4);
  auto nh = wirtinger_nohalf(scalar(g, zlog));
  CHECK(max_diff(nh.dzbar, [](cplx z) { return 2.0 * z * z / std::conj(z); }, b0) < 2e-11);
  CHECK_THROWS_AS(DiscGrid::make(8, 8), GridTooCoarse);
}

TEST_CASE("Cauchy-Green transform on closed forms") {
  auto g = grid128();
  auto t1 = cauchy_green(scalar(g, [](cplx) { return cplx(1); }));
  CHECK(max_diff(t1, [](cplx z) { return std::conj(z); }) < 1e-12);
  auto t2 = cauchy_green(scalar(g, [](cplx z) { return std::conj(z); }));
  CHECK(max_diff(t2, [](cplx z) { return std::conj(z) * std::conj(z) / 2.0; }) < 1e-12);
  auto t3 = cauchy_green(scalar(g, [](cplx z) { return z; }));
  CHECK(max_diff(t3, [](cplx z) { return z * std::conj(z) - 1.0; }) < 1e-12);
}

TEST_CASE("Cauchy-Green transform against direct quadrature") {
  auto g = DiscGrid::make(32, 64);
  std::vector<std::function<cplx(cplx)>> fs = {
      [](cplx) { return cplx(1); }, [](cplx z) { return std::conj(z); },
      [](cplx z) { return z * z * std::conj(z) + cplx(0, 2) * z; }, [](cplx z) { return std::exp(z) * std::conj(z); }};
  for (auto& f : fs) {
    auto t = cauchy_green(scalar(g, f));
    auto interp = GridFunction::Interpolant(t);
    for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.3), cplx(0.0, -0.8), cplx(0.7, 0.1)}) {
      cplx v;
      interp(z, &v);
      CHECK(std::abs(v - oracle::cauchy_green(f, z)) < 1e-9);
    }
  }
}

TEST_CASE("dbar inverts the Cauchy-Green transform on monomials") {
  auto g = grid128();
  for (int k = 0; k <= 3; ++k)
    for (int l = 0; l <= 3; ++l) {
      auto f = [k, l](cplx z) { return std::pow(z, k) * std::pow(std::conj(z), l); };
      auto back = wirtinger(cauchy_green(scalar(g, f))).dzbar;
      CHECK(max_diff(back, f, 0, 0.999) < 1e-6);
    }
}

TEST_CASE("Cauchy operator") {
  auto g = grid128();
  auto b2 = scalar(g, [](cplx z) { return z * z; }).boundary();
  CHECK(max_diff(cauchy_boundary(b2, 1, g), [](cplx z) { return z * z; }) < 1e-13);
  auto bc = scalar(g, [](cplx z) { return std::conj(z); }).boundary();
  CHECK(max_diff(cauchy_boundary(bc, 1, g), [](cplx) { return cplx(0); }) < 1e-13);
  std::vector<cplx> c(g->n_angular(), cplx(2, -1));
  CHECK(max_diff(cauchy_boundary(c, 1, g), [](cplx) { return cplx(2, -1); }) < 1e-13);
  // output is holomorphic
  auto bm = scalar(g, [](cplx z) { return std::exp(std::conj(z)) + z * z * z; }).boundary();
  auto h = cauchy_boundary(bm, 1, g);
  CHECK(wirtinger(h).dzbar.sup_norm() < 1e-9);
}

TEST_CASE("Calderon-Zygmund transform") {
  auto g = grid128();
  CHECK(calderon_zygmund(scalar(g, [](cplx) { return cplx(1); })).sup_norm() < 1e-12);
  CHECK(calderon_zygmund(scalar(g, [](cplx z) { return std::conj(z * z); })).sup_norm() < 1e-12);
  for (int k = 1; k <= 4; ++k) {
    auto t = calderon_zygmund(scalar(g, [k](cplx z) { return std::pow(z, k); }));
    CHECK(max_diff(t, [k](cplx z) {
            return double(k) * std::pow(z, k - 1) * std::conj(z) - double(k - 1) * std::pow(z, std::max(k - 2, 0));
          }) < 1e-11);
  }
  // principal-value quadrature oracle on a coarse grid
  auto gc = DiscGrid::make(32, 64);
  std::vector<std::function<cplx(cplx)>> fs = {[](cplx z) { return z * z * z; },
                                               [](cplx z) { return z * std::conj(z) + 1.0; }};
  for (auto& f : fs) {
    auto t = calderon_zygmund(scalar(gc, f));
    auto interp = GridFunction::Interpolant(t);
    for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.3), cplx(0.3, -0.6)}) {
      cplx v;
      interp(z, &v);
      CHECK(std::abs(v - oracle::calderon_zygmund(f, z)) < 1e-8);
    }
  }
}

TEST_CASE("Cauchy-Green formula residuals") {
  auto g = grid128();
  CHECK(cg_identity_residual(scalar(g, [](cplx z) { return std::conj(z); })) < 1e-6);
  CHECK(cg_identity_residual(scalar(g, [](cplx z) { return z * z * z; })) < 1e-8);
  CHECK(cg_identity_residual(scalar(g, zlog)) < 1e-4);
}

TEST_CASE("linearity of the three operators") {
  auto g = DiscGrid::make(64, 128);
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  auto rnd = [&] {
    cplx a(nd(rng), nd(rng)), b(nd(rng), nd(rng)), c(nd(rng), nd(rng));
    return GridFunction::sample(g, 2, [=](cplx z, cplx* o) {
      o[0] = a * z * std::conj(z) + b * std::exp(z);
      o[1] = c * std::conj(z) * z * z + a;
    });
  };
  for (int trial = 0; trial < 3; ++trial) {
    auto f = rnd(), h = rnd();
    cplx a(nd(rng), nd(rng)), b(nd(rng), nd(rng));
    auto lin = a * f + b * h;
    auto check = [&](auto op) {
      auto lhs = op(lin), rhs = a * op(f) + b * op(h);
      CHECK((lhs - rhs).sup_norm() < 1e-10 * std::max(1.0, rhs.sup_norm()));
    };
    check([](const GridFunction& x) { return cauchy_green(x); });
    check([](const GridFunction& x) { return calderon_zygmund(x); });
    check([](const GridFunction& x) { return cauchy_boundary(x.boundary(), x.dim(), x.grid()); });
  }
}

TEST_CASE("value at the origin is recovered from the innermost panel") {
  auto g = grid128();
  auto f = scalar(g, [](cplx z) { return std::exp(z) + std::conj(z) * z + 3.0; });
  CHECK(std::abs(f.value_at_origin()[0] - 4.0) < 1e-13);
  auto t = cauchy_green_normalized(scalar(g, [](cplx z) { return z; }));
  CHECK(std::abs(t.value_at_origin()[0]) < 1e-14);
}

TEST_CASE("grid CSV round-trips bit-exactly") {
  auto g = DiscGrid::make(32, 16, GridOptions{16, 1});
  auto f = GridFunction::sample(g, 2, [](cplx z, cplx* o) {
    o[0] = std::exp(z) / 3.0;
    o[1] = std::conj(z) * 1e-300 + cplx(1e300, -0.1);
  });
  std::stringstream ss;
  write_grid_csv(ss, f);
  auto back = read_grid_csv(ss);
  CHECK(back.grid()->same_layout(*g));
  CHECK(back.data() == f.data());
  std::stringstream bad("x,y\n1,2\n");
  CHECK_THROWS_AS(read_grid_csv(bad), ParseError);
}

TEST_CASE("interpolant reproduces smooth functions between nodes") {
  auto g = grid128();
  auto f = GridFunction::sample(g, 1, [](cplx z, cplx* o) { o[0] = z * z * std::conj(z) - std::exp(std::conj(z)); });
  GridFunction::Interpolant in(f);
  for (cplx z : {cplx(0.123, -0.456), cplx(1e-5, 2e-5), cplx(-0.9, 0.3), cplx(0, 0)}) {
    cplx v;
    in(z, &v);
    CHECK(std::abs(v - (z * z * std::conj(z) - std::exp(std::conj(z)))) < 1e-12);
  }
}

TEST_CASE("modulus report: identity map is 1-Lipschitz") {
  ModulusOptions o;
  o.pairs = 100000;
  auto rep = modulus_report(1, [](cplx z, cplx* out) { out[0] = z; }, o);
  CHECK(rep.lipschitz_estimate == doctest::Approx(1.0).epsilon(0.02));
  CHECK(rep.sample_pairs >= o.pairs);
  // ||z||_p on the disc: (2 pi / (p + 2))^(1/p)
  for (auto [p, v] : rep.lp_norms) CHECK(v == doctest::Approx(std::pow(2 * M_PI / (p + 2), 1 / p)).epsilon(1e-8));
}

TEST_CASE("modulus report: zero function") {
  auto g = grid128();
  auto rep = modulus_report(GridFunction(g, 2));
  CHECK(rep.sup_norm == 0);
  CHECK(rep.lipschitz_estimate == 0);
  CHECK(rep.log_lipschitz_estimate == 0);
  for (auto [a, v] : rep.holder_alpha_estimates) CHECK(v == 0);
}

TEST_CASE("modulus estimates only grow with the sampling budget") {
  auto f = [](cplx z, cplx* out) { out[0] = std::abs(z) * z; };
  double prev = 0;
  for (long pairs : {2000L, 8000L, 32000L}) {
    ModulusOptions o;
    o.pairs = pairs;
    o.seed = 7;
    auto rep = modulus_report(1, f, o);
    CHECK(rep.lipschitz_estimate >= prev);
    prev = rep.lipschitz_estimate;
  }
}

TEST_CASE("du of z^2 ln|z|^2 is Log-Lipschitz but not Lipschitz") {
  // Lipschitz quotients of 4z ln|z| grow like 4 ln(1/h): about 4 ln 2 per halving.
  auto g = DiscGrid::make(256, 64);
  auto du = GridFunction::sample(g, 1, [](cplx z, cplx* o) { o[0] = 4.0 * z * std::log(std::abs(z)) + z; });
  ModulusOptions o;
  o.pairs = 130000;
  o.coarsest = 4;
  o.finest = 16;
  auto rep = modulus_report(du, o);
  REQUIRE(rep.scales.size() == 13);
  double lo = 1e300, hi = 0;
  for (std::size_t i = 0; i < rep.scales.size(); ++i) {
    if (i) CHECK(rep.scales[i].lipschitz - rep.scales[i - 1].lipschitz >= 0.8 * 4 * std::log(2.0));
    lo = std::min(lo, rep.scales[i].log_lipschitz);
    hi = std::max(hi, rep.scales[i].log_lipschitz);
  }
  CHECK((hi - lo) / lo < 0.2);
}

}  // TEST_SUITE
