#pragma once

#include <random>

#include "pseudocurve/series.hpp"

namespace testutil {

using pseudocurve::QComplex;
using pseudocurve::TruncatedSeries;

inline QComplex random_q(std::mt19937& rng, int span = 5) {
  std::uniform_int_distribution<int> num(-span, span), den(1, span);
  return QComplex(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
}

// Random polynomial part of given order with roughly `density` nonzero terms per slot.
inline TruncatedSeries random_series(std::mt19937& rng, int order, int lowest = 0, double density = 0.6) {
  TruncatedSeries s(order);
  std::bernoulli_distribution keep(density);
  for (int k = lowest; k < order; ++k)
    if (keep(rng)) {
      QComplex c = random_q(rng);
      c.re.canonicalize();
      c.im.canonicalize();
      s.set(k, c);
    }
  return s;
}

// Same known part, plus random garbage at exponents [order, order + extra).
inline TruncatedSeries perturb_tail(std::mt19937& rng, const TruncatedSeries& s, int extra) {
  TruncatedSeries t = s.with_order(s.order() + extra);
  for (int k = s.order(); k < t.order(); ++k) t.set(k, random_q(rng));
  return t;
}

}  // namespace testutil
