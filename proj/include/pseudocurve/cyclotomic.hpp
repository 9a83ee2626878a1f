#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_m).
//
// Elements are polynomials in zeta of degree < phi(m), reduced modulo the m-th cyclotomic
// polynomial. An element without a field attached is a plain rational; it promotes itself
// when combined with a field element, so Series<Cyclotomic> can use Cyclotomic(0) and
// Cyclotomic(1) as generic constants.

#include <gmpxx.h>

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "pseudocurve/rational.hpp"

namespace pseudocurve {

struct CyclotomicField {
  int m = 1;
  std::vector<mpq_class> phi;  // monic, ascending coefficients, size deg+1
  int degree() const { return static_cast<int>(phi.size()) - 1; }
};

std::shared_ptr<const CyclotomicField> cyclotomic_field(int m);

class Cyclotomic {
 public:
  Cyclotomic() : a_{mpq_class(0)} {}
  Cyclotomic(long v) : a_{mpq_class(v)} {}  // NOLINT
  Cyclotomic(const mpq_class& q) : a_{q} {}  // NOLINT
  // Gaussian rational a + b i; needs 4 | m.
  Cyclotomic(std::shared_ptr<const CyclotomicField> f, const QComplex& z);

  static Cyclotomic zeta_power(std::shared_ptr<const CyclotomicField> f, long k);

  bool is_zero() const;
  const std::shared_ptr<const CyclotomicField>& field() const { return f_; }
  std::complex<double> to_complex() const;
  // The same number as a Gaussian rational, when it lies in Q(i).
  std::optional<QComplex> to_gaussian() const;

  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o) { return *this += -o; }
  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b);
  Cyclotomic inverse() const;

 private:
  Cyclotomic(std::shared_ptr<const CyclotomicField> f, std::vector<mpq_class> a) : f_(std::move(f)), a_(std::move(a)) {}
  Cyclotomic promoted(const std::shared_ptr<const CyclotomicField>& f) const;

  std::shared_ptr<const CyclotomicField> f_;
  std::vector<mpq_class> a_;
};

}  // namespace pseudocurve
