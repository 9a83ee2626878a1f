#include "pseudocurve/modulus.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pseudocurve/quadrature.hpp"

namespace pseudocurve {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void sample_pairs(int dim, const VectorMap& f, const ModulusOptions& o, ModulusReport& rep) {
  const int strata = o.finest - o.coarsest + 1;
  const long per = strata > 0 ? o.pairs / strata : 0;
  rep.holder_alpha_estimates.clear();
  for (double a : o.alphas) rep.holder_alpha_estimates.emplace_back(a, 0.0);
  std::vector<cplx> fx(dim), fy(dim);
  for (int j = o.coarsest; j <= o.finest; ++j) {
    std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32),
                      static_cast<std::uint32_t>(j)};
    std::mt19937_64 rng(seq);
    const double h = std::ldexp(1.0, -j);
    ScaleEstimate se;
    se.h = h;
    for (long n = 0; n < per; ++n) {
      cplx x, y;
      for (;;) {
        double rx;
        if (rng() & 1) {
          // log-uniform radius probes the neighbourhood of the origin
          const double lo = std::ldexp(1.0, -(j + 4));
          rx = lo * std::pow(1.0 / lo, uniform01(rng));
        } else {
          rx = std::sqrt(uniform01(rng));
        }
        x = std::polar(rx, 2 * std::numbers::pi * uniform01(rng));
        const double d = h * std::exp2(-uniform01(rng));
        const cplx step = std::polar(d, 2 * std::numbers::pi * uniform01(rng));
        y = x + step;
        if (std::abs(y) > 1) y = x - step;
        if (std::abs(y) <= 1 && d > 0) break;
      }
      f(x, fx.data());
      f(y, fy.data());
      double diff = 0;
      for (int c = 0; c < dim; ++c) diff += std::norm(fx[c] - fy[c]);
      diff = std::sqrt(diff);
      const double d = std::abs(x - y);
      se.lipschitz = std::max(se.lipschitz, diff / d);
      se.log_lipschitz = std::max(se.log_lipschitz, diff / (d * std::log(1 / d)));
      for (auto& [a, v] : rep.holder_alpha_estimates) v = std::max(v, diff / std::pow(d, a));
      ++se.pairs;
    }
    rep.lipschitz_estimate = std::max(rep.lipschitz_estimate, se.lipschitz);
    rep.log_lipschitz_estimate = std::max(rep.log_lipschitz_estimate, se.log_lipschitz);
    rep.sample_pairs += se.pairs;
    rep.scales.push_back(se);
  }
}

}  // namespace

ModulusReport modulus_report(const GridFunction& f, const ModulusOptions& opts) {
  ModulusReport rep;
  rep.sup_norm = f.sup_norm();
  const auto& g = *f.grid();
  for (double p : opts.lp) {
    double s = 0;
    for (int ir = 0; ir < g.n_radial(); ++ir)
      for (int it = 0; it < g.n_angular(); ++it) {
        double n2 = 0;
        for (int c = 0; c < f.dim(); ++c) n2 += std::norm(f.at(ir, it, c));
        s += g.area_weight(ir) * std::pow(n2, p / 2);
      }
    rep.lp_norms.emplace_back(p, std::pow(s, 1 / p));
  }
  GridFunction::Interpolant in(f);
  sample_pairs(f.dim(), [&](cplx z, cplx* o) { in(z, o); }, opts, rep);
  return rep;
}

ModulusReport modulus_report(int dim, const VectorMap& f, const ModulusOptions& opts) {
  ModulusReport rep;
  const auto& gl = gauss_legendre(64);
  const int nth = 128;
  std::vector<double> acc(opts.lp.size(), 0.0);
  std::vector<cplx> v(dim);
  for (int l = 0; l < 64; ++l) {
    const double r = 0.5 * (gl.x[l] + 1);
    for (int t = 0; t < nth; ++t) {
      f(std::polar(r, 2 * std::numbers::pi * t / nth), v.data());
      double n2 = 0;
      for (auto& c : v) n2 += std::norm(c);
      rep.sup_norm = std::max(rep.sup_norm, std::sqrt(n2));
      for (std::size_t k = 0; k < opts.lp.size(); ++k)
        acc[k] += 0.5 * gl.w[l] * r * (2 * std::numbers::pi / nth) * std::pow(n2, opts.lp[k] / 2);
    }
  }
  for (std::size_t k = 0; k < opts.lp.size(); ++k) rep.lp_norms.emplace_back(opts.lp[k], std::pow(acc[k], 1 / opts.lp[k]));
  sample_pairs(dim, f, opts, rep);
  return rep;
}

}  // namespace pseudocurve
