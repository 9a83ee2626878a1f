#pragma once

// Data-parallel inner loops. Each OpenMP kernel has a serial twin with the same arithmetic
// order, kept for equality tests and for benchmarking the parallel speedup.

#include <array>
#include <complex>
#include <vector>

#include "pseudocurve/grid.hpp"

namespace pseudocurve::kernels {

// Cauchy-Green transform of one scalar component given its angular modes.
// Layout of both arrays: [slot][radial node]. Output slot n receives input slot n+1.
void cauchy_green_modes(const DiscGrid& g, const std::vector<cplx>& in, std::vector<cplx>& out);
void cauchy_green_modes_serial(const DiscGrid& g, const std::vector<cplx>& in, std::vector<cplx>& out);

using Vec3 = std::array<double, 3>;

// Sum of signed solid angles (divided by 4 pi) over all segment pairs of two closed polygons.
double gauss_linking_sum(const std::vector<Vec3>& a, const std::vector<Vec3>& b);
double gauss_linking_sum_serial(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

// Solid angle subtended by segment pair (p1,p2) x (p3,p4), Klenin-Langowski form.
double segment_pair_solid_angle(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4);

}  // namespace pseudocurve::kernels
