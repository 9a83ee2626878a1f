#include "pseudocurve/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pseudocurve/errors.hpp"
#include "pseudocurve/quadrature.hpp"

namespace pseudocurve {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::shared_ptr<const DiscGrid> DiscGrid::make(int n_radial, int n_angular, GridOptions opts) {
  if (n_radial < 8 || n_angular < 16)
    throw GridTooCoarse("grid " + std::to_string(n_radial) + "x" + std::to_string(n_angular) +
                        " is below the 8x16 minimum");
  if ((n_angular & (n_angular - 1)) != 0) throw GridTooCoarse("n_angular must be a power of two");
  const int q = std::min(opts.panel_size, n_radial);
  if (q < 4 || n_radial % q != 0)
    throw GridTooCoarse("n_radial must be a multiple of the panel size " + std::to_string(q));
  const int panels = n_radial / q;
  int outer = opts.outer_panels > 0 ? opts.outer_panels : std::max(1, panels / 4);
  outer = std::min(outer, panels);

  std::shared_ptr<DiscGrid> g(new DiscGrid());
  g->n_radial_ = n_radial;
  g->n_angular_ = n_angular;
  g->q_ = q;
  g->outer_ = outer;

  // breaks: 0, 2^-(inner), ..., 1/2, then uniform to 1
  const int inner = panels - outer;
  g->breaks_.push_back(0.0);
  if (inner > 0) {
    for (int k = inner; k >= 1; --k) g->breaks_.push_back(std::ldexp(1.0, -k));
    for (int k = 1; k <= outer; ++k) g->breaks_.push_back(0.5 + 0.5 * k / outer);
  } else {
    for (int k = 1; k <= outer; ++k) g->breaks_.push_back(static_cast<double>(k) / outer);
  }
  g->breaks_.back() = 1.0;

  g->x_.resize(q);
  for (int j = 0; j < q; ++j) g->x_[q - 1 - j] = std::cos(2 * kPi * j / (2 * q - 1));
  g->x_[q - 1] = 1.0;
  g->w_.assign(q, 1.0);
  for (int j = 0; j < q; ++j)
    for (int k = 0; k < q; ++k)
      if (k != j) g->w_[j] /= (g->x_[j] - g->x_[k]);
  const double wmax = std::abs(*std::max_element(g->w_.begin(), g->w_.end(),
                                                 [](double a, double b) { return std::abs(a) < std::abs(b); }));
  for (auto& w : g->w_) w /= wmax;
  g->d_.assign(static_cast<std::size_t>(q) * q, 0.0);
  for (int i = 0; i < q; ++i) {
    double diag = 0;
    for (int j = 0; j < q; ++j) {
      if (i == j) continue;
      const double v = (g->w_[j] / g->w_[i]) / (g->x_[i] - g->x_[j]);
      g->d_[i * q + j] = v;
      diag -= v;
    }
    g->d_[i * q + i] = diag;
  }
  // integrate each basis polynomial exactly with q Gauss points
  const auto& gl = gauss_legendre(q);
  g->iw_.assign(q, 0.0);
  std::vector<double> basis(q);
  for (std::size_t l = 0; l < gl.x.size(); ++l) {
    ref_basis(g->x_, g->w_, gl.x[l], basis.data());
    for (int j = 0; j < q; ++j) g->iw_[j] += gl.w[l] * basis[j];
  }

  for (int k = 0; k < panels; ++k) {
    const double a = g->breaks_[k], b = g->breaks_[k + 1];
    for (int j = 0; j < q; ++j) {
      g->radii_.push_back(a + 0.5 * (b - a) * (g->x_[j] + 1));
      g->area_.push_back(0.5 * (b - a) * g->iw_[j] * g->radii_.back() * 2 * kPi / n_angular);
    }
  }
  g->radii_.back() = 1.0;
  g->cache_.resize(n_angular / 2 + 2);
  return g;
}

double DiscGrid::theta(int j) const { return 2 * kPi * j / n_angular_; }

cplx DiscGrid::point(int ir, int it) const { return std::polar(radii_[ir], theta(it)); }

int DiscGrid::panel_of(double r) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
  int k = static_cast<int>(it - breaks_.begin()) - 1;
  return std::clamp(k, 0, panels() - 1);
}

void DiscGrid::basis_at(int panel, double r, double* out) const {
  const double a = breaks_[panel], b = breaks_[panel + 1];
  ref_basis(x_, w_, 2 * (r - a) / (b - a) - 1, out);
}

double DiscGrid::area_weight(int ir) const { return area_[ir]; }

bool DiscGrid::same_layout(const DiscGrid& o) const {
  return n_radial_ == o.n_radial_ && n_angular_ == o.n_angular_ && q_ == o.q_ && outer_ == o.outer_;
}

RadialWeights DiscGrid::compute_weights(int p) const {
  RadialWeights rw;
  rw.p = p;
  const int q = q_, P = panels();
  rw.inner.assign(static_cast<std::size_t>(n_radial_) * q, 0.0);
  rw.outer.assign(static_cast<std::size_t>(n_radial_) * q, 0.0);
  rw.outer_full.assign(static_cast<std::size_t>(P) * q, 0.0);
  const int m = std::min(200, (p + q) / 2 + 4);
  const auto& gl = gauss_legendre(m);
  std::vector<double> basis(q);

  // Accumulate int_lo^hi L_j(s) * kernel(s) ds into dst.
  auto integrate = [&](int k, double lo, double hi, auto kernel, double* dst) {
    if (hi <= lo) return;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int l = 0; l < m; ++l) {
      const double s = mid + half * gl.x[l];
      basis_at(k, s, basis.data());
      const double wk = gl.w[l] * half * kernel(s);
      if (wk == 0.0) continue;
      for (int j = 0; j < q; ++j) dst[j] += wk * basis[j];
    }
  };

  for (int k = 0; k < P; ++k) {
    const double a = breaks_[k], b = breaks_[k + 1];
    for (int j = 0; j < q; ++j) {
      const int i = k * q + j;
      const double r = radii_[i];
      integrate(k, a, r, [&](double s) { return std::pow(s / r, p); }, &rw.inner[static_cast<std::size_t>(i) * q]);
      // geometric sub-intervals keep the decaying kernel resolved
      for (double lo = r; lo < b;) {
        const double hi = std::min(2 * lo, b);
        integrate(k, lo, hi, [&](double s) { return std::pow(r / s, p); }, &rw.outer[static_cast<std::size_t>(i) * q]);
        lo = hi;
      }
    }
    if (k > 0)
      integrate(k, a, b, [&](double s) { return std::pow(a / s, p); }, &rw.outer_full[static_cast<std::size_t>(k) * q]);
  }
  return rw;
}

const RadialWeights& DiscGrid::weights(int p) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (p >= static_cast<int>(cache_.size())) cache_.resize(p + 1);
  if (!cache_[p]) cache_[p] = std::make_unique<RadialWeights>(compute_weights(p));
  return *cache_[p];
}

// ---------------------------------------------------------------------------
// FFT

namespace {

struct Plans {
  fftw_plan fwd, inv;
};

const Plans& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(n), b(n);
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  Plans p;
  p.fwd = fftw_plan_dft_1d(n, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.inv = fftw_plan_dft_1d(n, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(n, p).first->second;
}

}  // namespace

void fft_forward(const cplx* in, cplx* out, int n) {
  std::vector<cplx> buf(in, in + n), res(n);
  fftw_execute_dft(plans_for(n).fwd, reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(res.data()));
  for (int k = 0; k < n; ++k) out[k] = res[k] / static_cast<double>(n);
}

void fft_inverse(const cplx* in, cplx* out, int n) {
  std::vector<cplx> buf(in, in + n), res(n);
  fftw_execute_dft(plans_for(n).inv, reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(res.data()));
  std::copy(res.begin(), res.end(), out);
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(GridPtr grid, int dim) : grid_(std::move(grid)), dim_(dim) {
  v_.assign(static_cast<std::size_t>(grid_->n_radial()) * grid_->n_angular() * dim_, cplx(0));
}

GridFunction GridFunction::sample(GridPtr grid, int dim, const PointMap& f) {
  GridFunction g(grid, dim);
  for (int ir = 0; ir < grid->n_radial(); ++ir)
    for (int it = 0; it < grid->n_angular(); ++it) f(grid->point(ir, it), &g.at(ir, it, 0));
  return g;
}

GridFunction GridFunction::component(int c) const {
  GridFunction g(grid_, 1);
  for (std::size_t n = 0; n < g.v_.size(); ++n) g.v_[n] = v_[n * dim_ + c];
  return g;
}

GridFunction GridFunction::stack(const std::vector<GridFunction>& parts) {
  int dim = 0;
  for (const auto& p : parts) dim += p.dim();
  GridFunction g(parts.at(0).grid_, dim);
  const std::size_t nodes = g.v_.size() / dim;
  int off = 0;
  for (const auto& p : parts) {
    if (!p.grid_->same_layout(*g.grid_)) throw DimensionError("stacking functions on different grids");
    for (std::size_t n = 0; n < nodes; ++n)
      for (int c = 0; c < p.dim(); ++c) g.v_[n * dim + off + c] = p.v_[n * p.dim() + c];
    off += p.dim();
  }
  return g;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  if (o.v_.size() != v_.size()) throw DimensionError("grid function shapes differ");
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += o.v_[n];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  if (o.v_.size() != v_.size()) throw DimensionError("grid function shapes differ");
  for (std::size_t n = 0; n < v_.size(); ++n) v_[n] -= o.v_[n];
  return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
  for (auto& x : v_) x *= s;
  return *this;
}

GridFunction GridFunction::minus_constant(const std::vector<cplx>& c) const {
  GridFunction g(*this);
  for (std::size_t n = 0; n < v_.size(); ++n) g.v_[n] -= c[n % dim_];
  return g;
}

double GridFunction::sup_norm() const { return sup_norm_below(2.0); }

double GridFunction::sup_norm_below(double r_max) const {
  double s = 0;
  for (int ir = 0; ir < n_radial(); ++ir) {
    if (grid_->radii()[ir] >= r_max) continue;
    for (int it = 0; it < n_angular(); ++it) {
      double n2 = 0;
      for (int c = 0; c < dim_; ++c) n2 += std::norm(at(ir, it, c));
      s = std::max(s, std::sqrt(n2));
    }
  }
  return s;
}

bool GridFunction::all_finite() const {
  for (const auto& x : v_)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

std::vector<cplx> GridFunction::modes() const {
  const int na = n_angular();
  std::vector<cplx> out(static_cast<std::size_t>(n_radial()) * dim_ * na);
  std::vector<cplx> ring(na);
  for (int ir = 0; ir < n_radial(); ++ir)
    for (int c = 0; c < dim_; ++c) {
      for (int it = 0; it < na; ++it) ring[it] = at(ir, it, c);
      fft_forward(ring.data(), &out[(static_cast<std::size_t>(ir) * dim_ + c) * na], na);
    }
  return out;
}

GridFunction GridFunction::from_modes(GridPtr grid, int dim, const std::vector<cplx>& modes) {
  GridFunction g(grid, dim);
  const int na = grid->n_angular();
  std::vector<cplx> ring(na);
  for (int ir = 0; ir < grid->n_radial(); ++ir)
    for (int c = 0; c < dim; ++c) {
      fft_inverse(&modes[(static_cast<std::size_t>(ir) * dim + c) * na], ring.data(), na);
      for (int it = 0; it < na; ++it) g.at(ir, it, c) = ring[it];
    }
  return g;
}

std::vector<cplx> GridFunction::value_at_origin() const {
  const int q = grid_->panel_size();
  std::vector<double> basis(q);
  grid_->basis_at(0, 0.0, basis.data());
  std::vector<cplx> out(dim_, cplx(0));
  for (int c = 0; c < dim_; ++c)
    for (int j = 0; j < q; ++j) {
      cplx mean = 0;
      for (int it = 0; it < n_angular(); ++it) mean += at(j, it, c);
      out[c] += basis[j] * mean / static_cast<double>(n_angular());
    }
  return out;
}

std::vector<cplx> GridFunction::boundary() const {
  std::vector<cplx> b(static_cast<std::size_t>(n_angular()) * dim_);
  const int ir = n_radial() - 1;
  for (int it = 0; it < n_angular(); ++it)
    for (int c = 0; c < dim_; ++c) b[static_cast<std::size_t>(it) * dim_ + c] = at(ir, it, c);
  return b;
}

GridFunction::Interpolant::Interpolant(const GridFunction& f) : grid_(f.grid()), dim_(f.dim()) {
  const int na = f.n_angular(), nr = f.n_radial();
  const auto md = f.modes();
  double biggest = 0;
  for (const auto& x : md) biggest = std::max(biggest, std::abs(x));
  for (int k = 0; k < na; ++k) {
    if (k == na / 2) continue;
    double amp = 0;
    for (int ir = 0; ir < nr; ++ir)
      for (int c = 0; c < dim_; ++c) amp = std::max(amp, std::abs(md[(static_cast<std::size_t>(ir) * dim_ + c) * na + k]));
    if (amp > 1e-15 * biggest) active_.push_back(k);
  }
  const std::size_t na_act = active_.size();
  profile_.resize(static_cast<std::size_t>(nr) * dim_ * na_act);
  for (int ir = 0; ir < nr; ++ir)
    for (int c = 0; c < dim_; ++c)
      for (std::size_t a = 0; a < na_act; ++a)
        profile_[(static_cast<std::size_t>(ir) * dim_ + c) * na_act + a] =
            md[(static_cast<std::size_t>(ir) * dim_ + c) * na + active_[a]];
  for (auto& k : active_) k = mode_of(k, na);
}

void GridFunction::Interpolant::operator()(cplx z, cplx* out) const {
  const double r = std::abs(z);
  if (r > 1 + 1e-12) throw DomainError("interpolation point outside the closed unit disc");
  const int q = grid_->panel_size();
  const int k = grid_->panel_of(r);
  double basis[64];
  grid_->basis_at(k, r, basis);
  const double th = std::arg(z);
  const std::size_t na_act = active_.size();
  std::vector<cplx> e(na_act);
  for (std::size_t a = 0; a < na_act; ++a) e[a] = std::polar(1.0, active_[a] * th);
  for (int c = 0; c < dim_; ++c) {
    cplx acc = 0;
    for (int j = 0; j < q; ++j) {
      const cplx* row = &profile_[(static_cast<std::size_t>(k * q + j) * dim_ + c) * na_act];
      cplx s = 0;
      for (std::size_t a = 0; a < na_act; ++a) s += row[a] * e[a];
      acc += basis[j] * s;
    }
    out[c] = acc;
  }
}

// ---------------------------------------------------------------------------
// CSV

void write_grid_csv(std::ostream& os, const GridFunction& f) {
  os << "r,theta,comp,re,im\n";
  char line[160];
  const auto& g = *f.grid();
  for (int ir = 0; ir < f.n_radial(); ++ir)
    for (int it = 0; it < f.n_angular(); ++it)
      for (int c = 0; c < f.dim(); ++c) {
        const cplx v = f.at(ir, it, c);
        std::snprintf(line, sizeof line, "%.17g,%.17g,%d,%.17g,%.17g\n", g.radii()[ir], g.theta(it), c, v.real(),
                      v.imag());
        os << line;
      }
}

void write_grid_csv(const std::string& path, const GridFunction& f) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot write " + path);
  write_grid_csv(os, f);
}

GridFunction read_grid_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("r,theta,comp,re,im", 0) != 0)
    throw ParseError("grid CSV must start with header r,theta,comp,re,im");
  struct Row {
    double r, th;
    int c;
    double re, im;
  };
  std::vector<Row> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Row row{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%d,%lf,%lf", &row.r, &row.th, &row.c, &row.re, &row.im) != 5)
      throw ParseError("malformed grid CSV row: " + line);
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError("empty grid CSV");
  int dim = 0;
  for (const auto& r : rows) dim = std::max(dim, r.c + 1);
  int na = 0;
  while (na < static_cast<int>(rows.size()) / dim && rows[static_cast<std::size_t>(na) * dim].r == rows[0].r) ++na;
  if (na == 0 || rows.size() % (static_cast<std::size_t>(na) * dim) != 0) throw ParseError("grid CSV is not a full tensor grid");
  const int nr = static_cast<int>(rows.size() / (static_cast<std::size_t>(na) * dim));
  std::vector<double> radii(nr);
  for (int ir = 0; ir < nr; ++ir) radii[ir] = rows[static_cast<std::size_t>(ir) * na * dim].r;
  // Find the panel layout that produced these radii.
  GridPtr grid;
  const int q = std::min(16, nr);
  for (int outer = 1; outer <= nr / std::max(q, 1) && !grid; ++outer) {
    try {
      auto cand = DiscGrid::make(nr, na, GridOptions{q, outer});
      bool ok = true;
      for (int ir = 0; ir < nr && ok; ++ir) ok = std::abs(cand->radii()[ir] - radii[ir]) <= 1e-14;
      if (ok) grid = cand;
    } catch (const GridTooCoarse&) {
    }
  }
  if (!grid) throw ParseError("grid CSV radii do not match any supported panel layout");
  GridFunction f(grid, dim);
  std::size_t n = 0;
  for (int ir = 0; ir < nr; ++ir)
    for (int it = 0; it < na; ++it)
      for (int c = 0; c < dim; ++c, ++n) {
        const Row& row = rows[n];
        if (row.c != c || std::abs(row.th - grid->theta(it)) > 1e-12)
          throw ParseError("grid CSV rows out of radial-major order");
        f.at(ir, it, c) = cplx(row.re, row.im);
      }
  return f;
}

GridFunction read_grid_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot read " + path);
  return read_grid_csv(is);
}

}  // namespace pseudocurve
