#pragma once

// Polar grids on the closed unit disc and C^n-valued functions sampled on them.
//
// Radially the grid is a union of panels, each carrying the same q Chebyshev-Radau points
// (right endpoint included). Panels halve in width towards the centre and are uniform on
// [1/2, 1], so both r = 0 and r = 1 are resolved. The origin itself is never a node.

#include <complex>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace pseudocurve {

using cplx = std::complex<double>;

struct GridOptions {
  int panel_size = 16;
  int outer_panels = 0;  // panels on [1/2, 1]; 0 picks max(1, panels/4)
};

// Radial quadrature weights for the Cauchy-Green sweeps, one block per angular power p.
struct RadialWeights {
  int p = 0;
  std::vector<double> inner;       // [node][j]: int_{a_k}^{r_i} L_j(s) (s/r_i)^p ds
  std::vector<double> outer;       // [node][j]: int_{r_i}^{b_k} L_j(s) (r_i/s)^p ds
  std::vector<double> outer_full;  // [panel][j]: int_{a_k}^{b_k} L_j(s) (a_k/s)^p ds
};

class DiscGrid {
 public:
  static std::shared_ptr<const DiscGrid> make(int n_radial, int n_angular, GridOptions opts = {});

  int n_radial() const { return n_radial_; }
  int n_angular() const { return n_angular_; }
  int panel_size() const { return q_; }
  int panels() const { return static_cast<int>(breaks_.size()) - 1; }
  int outer_panels() const { return outer_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& breaks() const { return breaks_; }
  double theta(int j) const;
  cplx point(int ir, int it) const;

  // Reference nodes in [-1, 1] (ascending, last = 1) and their barycentric weights.
  const std::vector<double>& ref_nodes() const { return x_; }
  const std::vector<double>& bary_weights() const { return w_; }
  // Differentiation matrix on the reference panel, row-major q x q.
  const std::vector<double>& ref_diff() const { return d_; }
  // Weights to integrate a panel interpolant over the whole panel (reference interval).
  const std::vector<double>& ref_integral() const { return iw_; }

  // Values of the q Lagrange basis polynomials of `panel` at radius r.
  void basis_at(int panel, double r, double* out) const;
  int panel_of(double r) const;

  // Lazily computed, cached for the grid's lifetime; thread-safe.
  const RadialWeights& weights(int p) const;
  // Area quadrature weight of node (ir, *) for integrating over the disc.
  double area_weight(int ir) const;

  bool same_layout(const DiscGrid& o) const;

 private:
  DiscGrid() = default;
  RadialWeights compute_weights(int p) const;

  int n_radial_ = 0, n_angular_ = 0, q_ = 0, outer_ = 0;
  std::vector<double> radii_, breaks_, x_, w_, d_, iw_, area_;
  mutable std::mutex mu_;
  mutable std::vector<std::unique_ptr<RadialWeights>> cache_;
};

using GridPtr = std::shared_ptr<const DiscGrid>;

// Angular mode index of FFT slot k on an n-point circle; the Nyquist slot maps to -n/2.
inline int mode_of(int k, int n) { return k < n / 2 ? k : k - n; }
inline int slot_of(int m, int n) { return m >= 0 ? m : m + n; }

// Forward transform (coefficients divided by n) and inverse, length n, thread-safe.
void fft_forward(const cplx* in, cplx* out, int n);
void fft_inverse(const cplx* in, cplx* out, int n);

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridPtr grid, int dim);

  using PointMap = std::function<void(cplx z, cplx* out)>;
  static GridFunction sample(GridPtr grid, int dim, const PointMap& f);

  const GridPtr& grid() const { return grid_; }
  int dim() const { return dim_; }
  int n_radial() const { return grid_->n_radial(); }
  int n_angular() const { return grid_->n_angular(); }

  cplx& at(int ir, int it, int c) { return v_[(static_cast<std::size_t>(ir) * n_angular() + it) * dim_ + c]; }
  const cplx& at(int ir, int it, int c) const { return v_[(static_cast<std::size_t>(ir) * n_angular() + it) * dim_ + c]; }
  std::vector<cplx>& data() { return v_; }
  const std::vector<cplx>& data() const { return v_; }

  GridFunction component(int c) const;
  static GridFunction stack(const std::vector<GridFunction>& parts);

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(cplx s);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(cplx s, GridFunction a) { return a *= s; }
  // Subtract a constant vector from every node.
  GridFunction minus_constant(const std::vector<cplx>& c) const;

  double sup_norm() const;
  // Sup over nodes with radius strictly below r_max.
  double sup_norm_below(double r_max) const;
  bool all_finite() const;

  // Angular Fourier coefficients: [ir][c][slot].
  std::vector<cplx> modes() const;
  static GridFunction from_modes(GridPtr grid, int dim, const std::vector<cplx>& modes);

  // Value at z = 0 extrapolated from the innermost panel's mean-value profile.
  std::vector<cplx> value_at_origin() const;
  // Values on the unit circle, [it][c].
  std::vector<cplx> boundary() const;

  // Spectral interpolant at an arbitrary point of the closed disc.
  class Interpolant {
   public:
    explicit Interpolant(const GridFunction& f);
    void operator()(cplx z, cplx* out) const;
    int dim() const { return dim_; }

   private:
    GridPtr grid_;
    int dim_;
    std::vector<int> active_;    // mode numbers kept
    std::vector<cplx> profile_;  // [ir][c][active index]
  };

 private:
  GridPtr grid_;
  int dim_ = 0;
  std::vector<cplx> v_;
};

// CSV with header r,theta,comp,re,im, radial-major, 17 significant digits.
void write_grid_csv(std::ostream& os, const GridFunction& f);
void write_grid_csv(const std::string& path, const GridFunction& f);
GridFunction read_grid_csv(std::istream& is);
GridFunction read_grid_csv(const std::string& path);

}  // namespace pseudocurve
