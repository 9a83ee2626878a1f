#pragma once

// Direct quadrature oracles for the disc operators, independent of the mode-by-mode
// implementation: polar coordinates centred at the evaluation point, Gauss-Legendre in the
// distance and the trapezoid rule in the direction.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "pseudocurve/quadrature.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Fn = std::function<cplx(cplx)>;

inline double distance_to_circle(cplx z, double phi) {
  const double b = std::real(std::conj(z) * std::polar(1.0, phi));
  return -b + std::sqrt(b * b + 1 - std::norm(z));
}

// -(1/pi) * integral over the disc of f(w)/(w - z).
inline cplx cauchy_green(const Fn& f, cplx z, int n_phi = 512, int n_s = 48) {
  const auto& gl = pseudocurve::gauss_legendre(n_s);
  cplx total = 0;
  for (int a = 0; a < n_phi; ++a) {
    const double phi = 2 * std::numbers::pi * a / n_phi;
    const double R = distance_to_circle(z, phi);
    const cplx e = std::polar(1.0, phi);
    cplx inner = 0;
    for (int l = 0; l < n_s; ++l) {
      const double s = 0.5 * R * (gl.x[l] + 1);
      inner += 0.5 * R * gl.w[l] * f(z + s * e);
    }
    total += std::conj(e) * inner;
  }
  return -total * (2 * std::numbers::pi / n_phi) / std::numbers::pi;
}

// Principal value -(1/pi) * integral of f(w)/(w - z)^2.
inline cplx calderon_zygmund(const Fn& f, cplx z, int n_phi = 512, int n_s = 48) {
  const auto& gl = pseudocurve::gauss_legendre(n_s);
  const cplx f0 = f(z);
  cplx total = 0;
  for (int a = 0; a < n_phi; ++a) {
    const double phi = 2 * std::numbers::pi * a / n_phi;
    const double R = distance_to_circle(z, phi);
    const cplx e = std::polar(1.0, phi);
    cplx inner = f0 * std::log(R);
    for (int l = 0; l < n_s; ++l) {
      const double s = 0.5 * R * (gl.x[l] + 1);
      inner += 0.5 * R * gl.w[l] * (f(z + s * e) - f0) / s;
    }
    total += std::conj(e * e) * inner;
  }
  return -total * (2 * std::numbers::pi / n_phi) / std::numbers::pi;
}

}  // namespace oracle
