#include "pseudocurve/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace pseudocurve {

const GaussRule& gauss_legendre(int m) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[m];
  if (slot) return *slot;
  auto r = std::make_unique<GaussRule>();
  r->x.resize(m);
  r->w.resize(m);
  for (int i = 0; i < m; ++i) {
    // Newton on P_m from the Chebyshev-like initial guess
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 1;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1;
      dp = m * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1, p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (x * p1 - p0) / (x * x - 1);
    r->x[m - 1 - i] = x;
    r->w[m - 1 - i] = 2 / ((1 - x * x) * dp * dp);
  }
  slot = std::move(r);
  return *slot;
}

void ref_basis(const std::vector<double>& nodes, const std::vector<double>& bary, double x, double* out) {
  const std::size_t q = nodes.size();
  for (std::size_t j = 0; j < q; ++j)
    if (x == nodes[j]) {
      for (std::size_t k = 0; k < q; ++k) out[k] = k == j ? 1.0 : 0.0;
      return;
    }
  double den = 0;
  for (std::size_t j = 0; j < q; ++j) {
    out[j] = bary[j] / (x - nodes[j]);
    den += out[j];
  }
  for (std::size_t j = 0; j < q; ++j) out[j] /= den;
}

}  // namespace pseudocurve
