#pragma once

#include <gmpxx.h>

#include <complex>
#include <ostream>
#include <string>

namespace pseudocurve {

// Complex number with exact rational real and imaginary parts.
struct QComplex {
  mpq_class re, im;

  QComplex() : re(0), im(0) {}
  QComplex(long v) : re(v), im(0) {}  // NOLINT: implicit integer promotion is intended
  QComplex(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  static QComplex I() { return QComplex(0, 1); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  QComplex conj() const { return QComplex(re, -im); }
  mpq_class norm2() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  QComplex& operator+=(const QComplex& o) { re += o.re; im += o.im; return *this; }
  QComplex& operator-=(const QComplex& o) { re -= o.re; im -= o.im; return *this; }
  QComplex& operator*=(const QComplex& o) {
    mpq_class r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  QComplex& operator/=(const QComplex& o);
  QComplex operator-() const { return QComplex(-re, -im); }

  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
  friend QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
  friend bool operator==(const QComplex& a, const QComplex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const QComplex& a, const QComplex& b) { return !(a == b); }
};

std::ostream& operator<<(std::ostream& os, const QComplex& c);

// "p/q" or "p" without decimals; throws ParseError.
mpq_class parse_rational(const std::string& s);
std::string format_rational(const mpq_class& q);

}  // namespace pseudocurve
