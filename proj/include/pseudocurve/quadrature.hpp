#pragma once

#include <vector>

namespace pseudocurve {

struct GaussRule {
  std::vector<double> x, w;  // on [-1, 1]
};

// Cached m-point Gauss-Legendre rule; thread-safe.
const GaussRule& gauss_legendre(int m);

// Lagrange basis values at x for the given nodes and barycentric weights.
void ref_basis(const std::vector<double>& nodes, const std::vector<double>& bary, double x, double* out);

}  // namespace pseudocurve
