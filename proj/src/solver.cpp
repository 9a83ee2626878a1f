#include "pseudocurve/solver.hpp"

#include <cmath>
#include <exception>

#include "pseudocurve/errors.hpp"
#include "pseudocurve/modulus.hpp"
#include "pseudocurve/operators.hpp"

namespace pseudocurve {

namespace {

// Real matrix of multiplication by the complex scalar c on C^n.
RealMatrix scalar_matrix(cplx c, int n) {
  RealMatrix m = RealMatrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    m(2 * k, 2 * k) = c.real();
    m(2 * k, 2 * k + 1) = -c.imag();
    m(2 * k + 1, 2 * k) = c.imag();
    m(2 * k + 1, 2 * k + 1) = c.real();
  }
  return m;
}

ComplexVector node_vector(const GridFunction& f, int ir, int it) {
  ComplexVector v(f.dim());
  for (int c = 0; c < f.dim(); ++c) v(c) = f.at(ir, it, c);
  return v;
}

void store(GridFunction& f, int ir, int it, const ComplexVector& v) {
  for (int c = 0; c < f.dim(); ++c) f.at(ir, it, c) = v(c);
}

// Runs body(ir) over radial rows in parallel and rethrows the first exception.
template <class Body>
void for_rows(int nr, Body body) {
  std::exception_ptr err;
#pragma omp parallel for schedule(static)
  for (int ir = 0; ir < nr; ++ir) {
    try {
      body(ir);
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

GridFunction constant(const GridPtr& g, const std::vector<cplx>& c) {
  GridFunction f(g, static_cast<int>(c.size()));
  for (int ir = 0; ir < f.n_radial(); ++ir)
    for (int it = 0; it < f.n_angular(); ++it)
      for (int k = 0; k < f.dim(); ++k) f.at(ir, it, k) = c[k];
  return f;
}

struct Rescaled {
  StructureField j;
  double delta = 1;
  double lipschitz = 0;
  bool reached = true;
};

// Halve delta until Lip(J_delta) on a ball of the given radius is below the target.
Rescaled rescale_structure(const StructureField& j, double radius, const SolverOptions& opts) {
  Ball ball{RealVector::Zero(j.dim()), std::max(radius, 1e-6)};
  double delta = 1;
  for (int k = 0; k <= 40; ++k, delta /= 2) {
    StructureField jd = k == 0 ? j : dilated(j, delta, 1);
    const double lip = lipschitz_estimate(jd, ball, opts.lipschitz_budget, opts.seed);
    if (lip < opts.lipschitz_target || !opts.auto_rescale) return {jd, delta, lip, lip < opts.lipschitz_target};
  }
  StructureField jd = dilated(j, delta, 1);
  return {jd, delta, lipschitz_estimate(jd, ball, opts.lipschitz_budget, opts.seed), false};
}

// u(eps z) / delta on the same grid, through the spectral interpolant.
GridFunction rescale_data(const GridFunction& u, double eps, double delta) {
  if (eps == 1 && delta == 1) return u;
  GridFunction::Interpolant in(u);
  const int d = u.dim();
  return GridFunction::sample(u.grid(), d, [&](cplx z, cplx* out) {
    in(eps * z, out);
    for (int c = 0; c < d; ++c) out[c] /= delta;
  });
}

double sup_q(const QField& q, const GridFunction& u) {
  double m = 0;
  for (int ir = 0; ir < u.n_radial(); ++ir)
    for (int it = 0; it < u.n_angular(); ++it) m = std::max(m, Eigen::JacobiSVD<ComplexMatrix>(q(node_vector(u, ir, it))).singularValues()(0));
  return m;
}

void record_increment(SolveReport& rep, double inc, double scale) {
  rep.increments.push_back(inc);
  const auto n = rep.increments.size();
  if (n >= 2) rep.contraction_ratios.push_back(rep.increments[n - 2] > 0 ? inc / rep.increments[n - 2] : 0.0);
  const auto& r = rep.contraction_ratios;
  if (r.size() >= 3 && r[r.size() - 1] > 1 && r[r.size() - 2] > 1 && r[r.size() - 3] > 1 && inc > 1e-12 * scale)
    throw DivergenceError("increments grew for three consecutive steps (last ratio " + std::to_string(r.back()) + ")");
}

}  // namespace

double surrogate_norm(const GridFunction& f) {
  const auto wd = wirtinger(f);
  ModulusOptions mo;
  mo.pairs = 2000;
  mo.finest = 10;
  mo.alphas = {0.5};
  mo.lp = {};
  const auto rep = modulus_report(GridFunction::stack({wd.dz, wd.dzbar}), mo);
  return f.sup_norm() + wd.dz.sup_norm() + wd.dzbar.sup_norm() + rep.holder_alpha_estimates.at(0).second;
}

GridFunction q_term(const QField& q, const GridFunction& u) {
  const auto dz = wirtinger(u).dz;
  GridFunction out(u.grid(), u.dim());
  for_rows(u.n_radial(), [&](int ir) {
    for (int it = 0; it < u.n_angular(); ++it)
      store(out, ir, it, q(node_vector(u, ir, it)) * node_vector(dz, ir, it).conjugate());
  });
  return out;
}

SolveReport picard_solve(const StructureField& j, const GridFunction& reference, const SolverOptions& opts) {
  if (j.dim() != 2 * reference.dim()) throw DimensionError("structure and reference dimensions differ");
  SolveReport rep;
  const Rescaled rs = rescale_structure(j, std::max(reference.sup_norm(), 1e-3), opts);
  rep.delta = rep.eps = rs.delta;
  rep.lipschitz = rs.lipschitz;
  if (!rs.reached)
    rep.warnings.push_back("SmallnessWarning: Lipschitz estimate " + std::to_string(rs.lipschitz) + " above target");
  const GridFunction ref = rescale_data(reference, rep.eps, rep.delta);
  const QField q = j_to_q(rs.j);
  const int dim = ref.dim();

  GridFunction tc = cauchy_boundary(ref.boundary(), dim, ref.grid());
  tc = tc.minus_constant(tc.value_at_origin());
  GridFunction u = opts.start_from_boundary ? tc : ref;
  const double scale = std::max(surrogate_norm(ref), 1e-300);

  for (int n = 1; n <= opts.max_iter; ++n) {
    GridFunction next = tc + cauchy_green_normalized(q_term(q, u));
    const double inc = surrogate_norm(next - u);
    u = std::move(next);
    rep.iterations = n;
    record_increment(rep, inc, scale);
    if (inc < opts.tol * scale) break;
  }
  rep.final_residual = cr_residual(rs.j, u).sup_norm();
  const bool small_step = !rep.increments.empty() && rep.increments.back() < opts.tol * scale;
  rep.converged = small_step && rep.final_residual < opts.residual_tol &&
                  (rep.contraction_ratios.empty() || rep.contraction_ratios.back() < 1);
  if (sup_q(q, u) >= 0.5) rep.warnings.push_back("SmallnessWarning: |Q| reaches 1/2 along the solution");
  rep.solution = std::move(u);
  return rep;
}

GridFunction apply_dbar_j(const DiscMatrixField& j, const DiscMatrixField& r, const GridFunction& w) {
  const auto [dx, dy] = real_partials(w);
  const int n = w.dim();
  const RealMatrix js = standard_j(n);
  GridFunction out(w.grid(), n);
  const auto& g = *w.grid();
  for_rows(w.n_radial(), [&](int ir) {
    for (int it = 0; it < w.n_angular(); ++it) {
      const cplx z = g.point(ir, it);
      const RealMatrix jz = j ? j(z) : js;
      RealVector v = 0.5 * (to_real(node_vector(dx, ir, it)) + jz * to_real(node_vector(dy, ir, it)));
      if (r) v += r(z) * to_real(node_vector(w, ir, it));
      store(out, ir, it, to_complex(v));
    }
  });
  return out;
}

GridFunction inverse_dbar(const DiscMatrixField& j, const DiscMatrixField& r, const GridFunction& rhs, int series_terms,
                          NeumannInfo* info) {
  const int n = rhs.dim();
  const auto& g = *rhs.grid();
  const RealMatrix js = standard_j(n);
  // D = (J - J_st) d_y / 2 + R, so that dbar_J + R = dbar + D.
  std::vector<RealMatrix> dj, rr;
  const bool has_j = static_cast<bool>(j), has_r = static_cast<bool>(r);
  const std::size_t nodes = static_cast<std::size_t>(g.n_radial()) * g.n_angular();
  if (has_j) dj.resize(nodes);
  if (has_r) rr.resize(nodes);
  for_rows(g.n_radial(), [&](int ir) {
    for (int it = 0; it < g.n_angular(); ++it) {
      const cplx z = g.point(ir, it);
      const std::size_t k = static_cast<std::size_t>(ir) * g.n_angular() + it;
      if (has_j) dj[k] = 0.5 * (j(z) - js);
      if (has_r) rr[k] = r(z);
    }
  });
  auto apply_d = [&](const GridFunction& t) {
    GridFunction out(t.grid(), n);
    const GridFunction dy = has_j ? real_partials(t).second : GridFunction();
    for_rows(g.n_radial(), [&](int ir) {
      for (int it = 0; it < g.n_angular(); ++it) {
        const std::size_t k = static_cast<std::size_t>(ir) * g.n_angular() + it;
        RealVector v = RealVector::Zero(2 * n);
        if (has_j) v += dj[k] * to_real(node_vector(dy, ir, it));
        if (has_r) v += rr[k] * to_real(node_vector(t, ir, it));
        store(out, ir, it, to_complex(v));
      }
    });
    return out;
  };

  NeumannInfo local;
  NeumannInfo& inf = info ? *info : local;
  inf = NeumannInfo{};
  GridFunction term = cauchy_green_normalized(rhs);
  GridFunction w = term;
  inf.term_norms.push_back(term.sup_norm());
  for (int k = 1; k < series_terms && (has_j || has_r); ++k) {
    if (inf.term_norms.back() == 0) break;
    term = cauchy_green_normalized(-1.0 * apply_d(term));
    const double nk = term.sup_norm();
    const double ratio = nk / inf.term_norms.back();
    inf.ratio = std::max(inf.ratio, ratio);
    if (ratio >= 0.5)
      throw ContractionError("Neumann series correction has norm ratio " + std::to_string(ratio) + " >= 1/2");
    inf.term_norms.push_back(nk);
    w += term;
  }
  inf.terms = static_cast<int>(inf.term_norms.size());
  inf.tail_estimate = inf.ratio < 1 ? inf.term_norms.back() * inf.ratio / (1 - inf.ratio) : INFINITY;
  return w;
}

SolveReport perturb_cusp(const StructureField& j, const GridFunction& u0_in, int nu, const std::vector<cplx>& w0_in,
                         const SolverOptions& opts) {
  const int n = u0_in.dim();
  if (nu < 0) throw DomainError("nu must be nonnegative");
  if (static_cast<int>(w0_in.size()) != n) throw DimensionError("w0 must have one entry per curve component");
  if (j.dim() != 2 * n) throw DimensionError("structure and curve dimensions differ");
  SolveReport rep;
  const Rescaled rs = rescale_structure(j, std::max(u0_in.sup_norm(), 1e-3), opts);
  rep.delta = rep.eps = rs.delta;
  rep.lipschitz = rs.lipschitz;
  if (!rs.reached)
    rep.warnings.push_back("SmallnessWarning: Lipschitz estimate " + std::to_string(rs.lipschitz) + " above target");
  const GridFunction u0 = rescale_data(u0_in, rep.eps, rep.delta);
  // u(eps z)/delta = u0(eps z)/delta + z^nu (eps^nu / delta) w(eps z).
  std::vector<cplx> w0(w0_in);
  for (auto& c : w0) c *= std::pow(rep.eps, nu) / rep.delta;

  const double res0 = cr_residual(rs.j, u0).sup_norm();
  if (res0 > 10 * opts.tol)
    rep.warnings.push_back("SmallnessWarning: u0 has Cauchy-Riemann residual " + std::to_string(res0));

  const auto& g = *u0.grid();
  const GridPtr gp = u0.grid();
  const RealMatrix js = standard_j(n);
  const GridFunction dy_u0 = real_partials(u0).second;
  const std::size_t nodes = static_cast<std::size_t>(g.n_radial()) * g.n_angular();
  std::vector<RealMatrix> j_u0(nodes);
  for_rows(g.n_radial(), [&](int ir) {
    for (int it = 0; it < g.n_angular(); ++it) j_u0[static_cast<std::size_t>(ir) * g.n_angular() + it] = rs.j.at(node_vector(u0, ir, it));
  });

  auto assemble = [&](const GridFunction& w) {
    GridFunction u(gp, n);
    for (int ir = 0; ir < g.n_radial(); ++ir)
      for (int it = 0; it < g.n_angular(); ++it) {
        const cplx zn = std::pow(g.point(ir, it), nu);
        for (int c = 0; c < n; ++c) u.at(ir, it, c) = u0.at(ir, it, c) + zn * w.at(ir, it, c);
      }
    return u;
  };

  const GridFunction w_seed = constant(gp, w0);
  GridFunction w = w_seed;
  const double scale = std::max(surrogate_norm(u0) + surrogate_norm(w_seed), 1e-300);
  for (int it_n = 1; it_n <= opts.max_iter; ++it_n) {
    const GridFunction u = assemble(w);
    const GridFunction dy_w = real_partials(w).second;
    // 2 dbar w = -(J^nu - J_st) d_y w - nu (Id + J^nu J_st) w / z - z^-nu (J(u) - J(u0)) d_y u0.
    GridFunction half_f(gp, n);
    for_rows(g.n_radial(), [&](int ir) {
      for (int it = 0; it < g.n_angular(); ++it) {
        const std::size_t k = static_cast<std::size_t>(ir) * g.n_angular() + it;
        const cplx z = g.point(ir, it);
        const RealMatrix ju = rs.j.at(node_vector(u, ir, it));
        const RealMatrix down = scalar_matrix(std::pow(z, -nu), n);
        // J^nu - J_st = z^-nu (J(u) - J_st) z^nu, and Id + J^nu J_st = (J^nu - J_st) J_st.
        const RealMatrix djnu = down * (ju - js) * scalar_matrix(std::pow(z, nu), n);
        RealVector f = -djnu * to_real(node_vector(dy_w, ir, it));
        if (nu > 0) f -= static_cast<double>(nu) * djnu * js * scalar_matrix(1.0 / z, n) * to_real(node_vector(w, ir, it));
        f -= down * (ju - j_u0[k]) * to_real(node_vector(dy_u0, ir, it));
        store(half_f, ir, it, to_complex(0.5 * f));
      }
    });
    GridFunction next = w_seed + cauchy_green_normalized(half_f);
    const auto at0 = next.value_at_origin();
    for (int c = 0; c < n; ++c)
      if (std::abs(at0[c] - w0[c]) > 1e-12 * (1 + std::abs(w0[c])))
        throw PrecisionError("w(0) drifted from w0 during the iteration");
    const double inc = surrogate_norm(next - w);
    w = std::move(next);
    rep.iterations = it_n;
    record_increment(rep, inc, scale);
    if (inc < opts.tol * scale) break;
  }
  GridFunction u = assemble(w);
  rep.final_residual = cr_residual(rs.j, u).sup_norm();
  const bool small_step = !rep.increments.empty() && rep.increments.back() < opts.tol * scale;
  rep.converged = small_step && rep.final_residual < opts.residual_tol &&
                  (rep.contraction_ratios.empty() || rep.contraction_ratios.back() < 1);
  rep.solution = std::move(u);
  rep.w = std::move(w);
  return rep;
}

double immersion_margin(const GridFunction& u) {
  const GridFunction dx = real_partials(u).first;
  double lo = INFINITY, hi = 0;
  for (int ir = 0; ir < u.n_radial(); ++ir)
    for (int it = 0; it < u.n_angular(); ++it) {
      const double v = node_vector(dx, ir, it).norm();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return hi > 0 ? lo / hi : 0;
}

nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["iterations"] = r.iterations;
  j["increments"] = r.increments;
  j["contraction_ratios"] = r.contraction_ratios;
  j["final_residual"] = r.final_residual;
  j["converged"] = r.converged;
  j["delta"] = r.delta;
  j["eps"] = r.eps;
  j["lipschitz"] = r.lipschitz;
  j["warnings"] = r.warnings;
  j["grid"] = {{"n_radial", r.solution.grid() ? r.solution.n_radial() : 0},
               {"n_angular", r.solution.grid() ? r.solution.n_angular() : 0}};
  if (r.w) j["w_at_origin"] = [&] {
      nlohmann::json a = nlohmann::json::array();
      for (cplx c : r.w->value_at_origin()) a.push_back({c.real(), c.imag()});
      return a;
    }();
  j["grid_dump"] = r.grid_dump;
  return j;
}

}  // namespace pseudocurve
