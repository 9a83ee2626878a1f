#pragma once

// J-holomorphic discs by successive approximation.
//
// picard_solve iterates
//   u_{n+1} = T_C u - (T_C u)(0) + T_CG[Q(J(u_n)) conj(du_n/dz)] - (same)(0),
// inverse_dbar sums the Neumann series of the normalized right inverse of dbar_J + R, and
// perturb_cusp solves for u = u0 + z^nu w with w(0) = w0 prescribed.
//
// Rescaling: when enabled, the structure is replaced by J_delta(x) = J(delta x) with delta halved
// until its sampled Lipschitz constant drops below the target, and the data by
// u(eps z) / delta with eps = delta. Solutions are reported in that rescaled frame.

#include <complex>
#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pseudocurve/acs.hpp"
#include "pseudocurve/grid.hpp"

namespace pseudocurve {

struct SolverOptions {
  double tol = 1e-6;           // on the surrogate norm of the increment, relative to the data
  int max_iter = 50;
  double residual_tol = 1e-6;  // sup of the Cauchy-Riemann residual required for `converged`
  bool auto_rescale = true;
  double lipschitz_target = 0.05;
  long lipschitz_budget = 20000;
  std::uint64_t seed = 0;
  bool start_from_boundary = false;  // u_0 = T_C u - (T_C u)(0) instead of u_0 = u
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> increments;          // surrogate norm of u_{n+1} - u_n
  std::vector<double> contraction_ratios;  // increments[n] / increments[n-1]
  double final_residual = 0;
  bool converged = false;
  GridFunction solution;
  std::optional<GridFunction> w;  // perturb_cusp only
  double delta = 1, eps = 1;
  double lipschitz = 0;  // sampled Lip of the (rescaled) structure
  std::vector<std::string> warnings;
  std::string grid_dump;
};

nlohmann::json to_json(const SolveReport& r);

// C^{1,1/2} surrogate: sup|f| + sup|df/dz| + sup|df/dzbar| + sampled 1/2-Holder quotient of
// the derivatives (fixed seed, so it is a deterministic function of f).
double surrogate_norm(const GridFunction& f);

// Q(J(u)) conj(du/dz) node-wise.
GridFunction q_term(const QField& q, const GridFunction& u);

SolveReport picard_solve(const StructureField& j, const GridFunction& reference, const SolverOptions& opts = {});

// Matrix field on the disc (not on the target), evaluated at grid nodes. Empty means J_st for
// the structure and 0 for the zeroth-order term.
using DiscMatrixField = std::function<RealMatrix(cplx z)>;

struct NeumannInfo {
  int terms = 0;
  std::vector<double> term_norms;
  double ratio = 0;          // largest ratio of successive term norms
  double tail_estimate = 0;  // last term * ratio / (1 - ratio)
};

// dbar_J w = (d_x w + J d_y w) / 2. Returns w with (dbar_J + R) w = rhs and w(0) = 0.
// Throws ContractionError when successive terms shrink by less than a factor 2.
GridFunction inverse_dbar(const DiscMatrixField& j, const DiscMatrixField& r, const GridFunction& rhs, int series_terms,
                          NeumannInfo* info = nullptr);
// (dbar_J + R) w, the operator inverted above.
GridFunction apply_dbar_j(const DiscMatrixField& j, const DiscMatrixField& r, const GridFunction& w);

SolveReport perturb_cusp(const StructureField& j, const GridFunction& u0, int nu, const std::vector<cplx>& w0,
                         const SolverOptions& opts = {});

// min over nodes of |d_x u| divided by its max: positive margin means immersed on the grid.
double immersion_margin(const GridFunction& u);

}  // namespace pseudocurve
