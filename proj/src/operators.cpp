#include "pseudocurve/operators.hpp"

#include "pseudocurve/errors.hpp"
#include "pseudocurve/kernels.hpp"

namespace pseudocurve {

namespace {

// Modes of component c rearranged as [slot][ir].
std::vector<cplx> component_modes(const std::vector<cplx>& md, int nr, int dim, int na, int c) {
  std::vector<cplx> out(static_cast<std::size_t>(na) * nr);
  for (int ir = 0; ir < nr; ++ir)
    for (int k = 0; k < na; ++k)
      out[static_cast<std::size_t>(k) * nr + ir] = md[(static_cast<std::size_t>(ir) * dim + c) * na + k];
  return out;
}

void store_component(std::vector<cplx>& md, const std::vector<cplx>& comp, int nr, int dim, int na, int c) {
  for (int ir = 0; ir < nr; ++ir)
    for (int k = 0; k < na; ++k)
      md[(static_cast<std::size_t>(ir) * dim + c) * na + k] = comp[static_cast<std::size_t>(k) * nr + ir];
}

bool valid_mode(int m, int na) { return m > -na / 2 && m < na / 2; }

// Radial derivative of one mode profile, panel by panel.
void radial_derivative(const DiscGrid& g, const cplx* f, cplx* df) {
  const int q = g.panel_size();
  const auto& d = g.ref_diff();
  const auto& br = g.breaks();
  for (int k = 0; k < g.panels(); ++k) {
    const double scale = 2.0 / (br[k + 1] - br[k]);
    for (int i = 0; i < q; ++i) {
      cplx acc = 0;
      for (int j = 0; j < q; ++j) acc += d[i * q + j] * f[k * q + j];
      df[k * q + i] = scale * acc;
    }
  }
}

GridFunction transform(const GridFunction& f, bool parallel) {
  const auto& g = *f.grid();
  const int nr = g.n_radial(), na = g.n_angular(), dim = f.dim();
  auto md = f.modes();
  std::vector<cplx> out_md(md.size());
  std::vector<cplx> res;
  for (int c = 0; c < dim; ++c) {
    auto in = component_modes(md, nr, dim, na, c);
    if (parallel)
      kernels::cauchy_green_modes(g, in, res);
    else
      kernels::cauchy_green_modes_serial(g, in, res);
    store_component(out_md, res, nr, dim, na, c);
  }
  return GridFunction::from_modes(f.grid(), dim, out_md);
}

}  // namespace

Wirtinger wirtinger(const GridFunction& f) {
  const auto& g = *f.grid();
  const int nr = g.n_radial(), na = g.n_angular(), dim = f.dim();
  const auto md = f.modes();
  std::vector<cplx> dz(md.size(), 0.0), dzb(md.size(), 0.0);
  std::vector<cplx> prof(nr), dprof(nr);
  const auto& r = g.radii();
  for (int c = 0; c < dim; ++c) {
    const auto cm = component_modes(md, nr, dim, na, c);
    std::vector<cplx> odz(cm.size(), 0.0), odzb(cm.size(), 0.0);
    for (int k = 0; k < na; ++k) {
      if (k == na / 2) continue;
      const int m = mode_of(k, na);
      const cplx* F = &cm[static_cast<std::size_t>(k) * nr];
      radial_derivative(g, F, dprof.data());
      if (valid_mode(m - 1, na)) {
        cplx* o = &odz[static_cast<std::size_t>(slot_of(m - 1, na)) * nr];
        for (int i = 0; i < nr; ++i) o[i] = 0.5 * (dprof[i] + (m / r[i]) * F[i]);
      }
      if (valid_mode(m + 1, na)) {
        cplx* o = &odzb[static_cast<std::size_t>(slot_of(m + 1, na)) * nr];
        for (int i = 0; i < nr; ++i) o[i] = 0.5 * (dprof[i] - (m / r[i]) * F[i]);
      }
    }
    store_component(dz, odz, nr, dim, na, c);
    store_component(dzb, odzb, nr, dim, na, c);
  }
  return {GridFunction::from_modes(f.grid(), dim, dz), GridFunction::from_modes(f.grid(), dim, dzb)};
}

Wirtinger wirtinger_nohalf(const GridFunction& f) {
  auto w = wirtinger(f);
  w.dz *= 2.0;
  w.dzbar *= 2.0;
  return w;
}

std::pair<GridFunction, GridFunction> real_partials(const GridFunction& f) {
  auto w = wirtinger(f);
  // d_x = d + dbar, d_y = i (d - dbar)
  GridFunction dx = w.dz + w.dzbar;
  GridFunction dy = cplx(0, 1) * (w.dz - w.dzbar);
  return {dx, dy};
}

GridFunction cauchy_green(const GridFunction& f) { return transform(f, true); }
GridFunction cauchy_green_serial(const GridFunction& f) { return transform(f, false); }

GridFunction cauchy_green_normalized(const GridFunction& f) {
  GridFunction t = cauchy_green(f);
  return t.minus_constant(t.value_at_origin());
}

GridFunction calderon_zygmund(const GridFunction& f) {
  const auto& g = *f.grid();
  const int nr = g.n_radial(), na = g.n_angular(), dim = f.dim();
  const auto md = f.modes();
  std::vector<cplx> out(md.size(), 0.0);
  std::vector<cplx> res;
  const auto& r = g.radii();
  for (int c = 0; c < dim; ++c) {
    auto in = component_modes(md, nr, dim, na, c);
    kernels::cauchy_green_modes(g, in, res);
    std::vector<cplx> oc(in.size(), 0.0);
    // d_z of mode n of T_CG f is mode n-1: (n/r) g_n + f_{n+1}
    for (int k = 0; k < na; ++k) {
      const int n = mode_of(k, na);
      if (k == na / 2 || !valid_mode(n - 1, na) || !valid_mode(n + 1, na)) continue;
      const cplx* gn = &res[static_cast<std::size_t>(k) * nr];
      const cplx* fn = &in[static_cast<std::size_t>(slot_of(n + 1, na)) * nr];
      cplx* o = &oc[static_cast<std::size_t>(slot_of(n - 1, na)) * nr];
      for (int i = 0; i < nr; ++i) o[i] = (n / r[i]) * gn[i] + fn[i];
    }
    store_component(out, oc, nr, dim, na, c);
  }
  return GridFunction::from_modes(f.grid(), dim, out);
}

GridFunction cauchy_boundary(const std::vector<cplx>& boundary, int dim, GridPtr grid) {
  const int nr = grid->n_radial(), na = grid->n_angular();
  if (boundary.size() != static_cast<std::size_t>(na) * dim)
    throw DimensionError("boundary data must have one vector per angular node");
  std::vector<cplx> ring(na), bm(static_cast<std::size_t>(na) * dim);
  for (int c = 0; c < dim; ++c) {
    for (int it = 0; it < na; ++it) ring[it] = boundary[static_cast<std::size_t>(it) * dim + c];
    fft_forward(ring.data(), &bm[static_cast<std::size_t>(c) * na], na);
  }
  std::vector<cplx> md(static_cast<std::size_t>(nr) * dim * na, 0.0);
  for (int ir = 0; ir < nr; ++ir) {
    const double r = grid->radii()[ir];
    for (int c = 0; c < dim; ++c) {
      double rk = 1;
      for (int k = 0; k < na / 2; ++k, rk *= r)
        md[(static_cast<std::size_t>(ir) * dim + c) * na + k] = rk * bm[static_cast<std::size_t>(c) * na + k];
    }
  }
  return GridFunction::from_modes(grid, dim, md);
}

double cg_identity_residual(const GridFunction& f) {
  const auto w = wirtinger(f);
  GridFunction res = f - cauchy_boundary(f.boundary(), f.dim(), f.grid()) - cauchy_green(w.dzbar);
  return res.sup_norm_below(1.0);
}

}  // namespace pseudocurve
