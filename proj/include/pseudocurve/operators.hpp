#pragma once

// Singular integral operators of the unit disc, applied mode by mode in the angle.
//
// Conventions: d/dz = (d_x - i d_y)/2 and d/dzbar = (d_x + i d_y)/2 (with the halves).
// T_CG is the right inverse of d/dzbar given by -(1/pi) * area integral of f(w)/(w - z);
// T_C is the holomorphic extension of the nonnegative Fourier modes of boundary data;
// T_CZ = d/dz o T_CG.

#include <utility>
#include <vector>

#include "pseudocurve/grid.hpp"

namespace pseudocurve {

struct Wirtinger {
  GridFunction dz, dzbar;
};

Wirtinger wirtinger(const GridFunction& f);
// The same derivatives without the factor 1/2, i.e. d_x -/+ i d_y.
Wirtinger wirtinger_nohalf(const GridFunction& f);

// Real partials d_x f and d_y f.
std::pair<GridFunction, GridFunction> real_partials(const GridFunction& f);

GridFunction cauchy_green(const GridFunction& f);
GridFunction cauchy_green_serial(const GridFunction& f);
GridFunction calderon_zygmund(const GridFunction& f);
// Boundary values laid out [angle][component] on the grid's angular nodes.
GridFunction cauchy_boundary(const std::vector<cplx>& boundary, int dim, GridPtr grid);

// T_CG f - (T_CG f)(0): the normalized right inverse vanishing at the origin.
GridFunction cauchy_green_normalized(const GridFunction& f);

// Sup over interior nodes of f - T_C(f on the circle) - T_CG(df/dzbar).
double cg_identity_residual(const GridFunction& f);

}  // namespace pseudocurve
