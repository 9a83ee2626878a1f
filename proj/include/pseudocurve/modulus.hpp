#pragma once

// Sampled moduli of continuity: Holder, Lipschitz and Log-Lipschitz quotients over point
// pairs stratified by dyadic distance, plus L^p norms by quadrature. Every estimate is a
// supremum over the pairs drawn, hence a lower bound of the true modulus. Each stratum has
// its own random stream, so a larger budget only ever adds pairs.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "pseudocurve/grid.hpp"

namespace pseudocurve {

struct ScaleEstimate {
  double h = 0;  // pairs at distance in (h/2, h]
  double lipschitz = 0;
  double log_lipschitz = 0;
  long pairs = 0;
};

struct ModulusReport {
  double sup_norm = 0;
  std::vector<std::pair<double, double>> lp_norms;                // (p, norm)
  std::vector<std::pair<double, double>> holder_alpha_estimates;  // (alpha, seminorm)
  double lipschitz_estimate = 0;
  double log_lipschitz_estimate = 0;
  long sample_pairs = 0;
  std::vector<ScaleEstimate> scales;
};

struct ModulusOptions {
  long pairs = 100000;
  std::uint64_t seed = 0;
  int coarsest = 1;  // h = 2^-coarsest
  int finest = 16;   // h = 2^-finest
  std::vector<double> alphas{0.25, 0.5, 0.75};
  std::vector<double> lp{1, 2, 4};
};

using VectorMap = std::function<void(cplx z, cplx* out)>;

ModulusReport modulus_report(const GridFunction& f, const ModulusOptions& opts = {});
ModulusReport modulus_report(int dim, const VectorMap& f, const ModulusOptions& opts = {});

}  // namespace pseudocurve
