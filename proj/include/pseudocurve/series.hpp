#pragma once

// Truncated univariate power series with exact coefficients.
//
// A series of order N knows its coefficients at exponents 0..N-1; everything at N and
// beyond is unknown (not zero). Each operation reports the tightest order it can vouch for.
// The coefficient type C needs field arithmetic, construction from long and from mpq_class,
// and is_zero(). QComplex and Cyclotomic both qualify.

#include <gmpxx.h>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pseudocurve/errors.hpp"
#include "pseudocurve/rational.hpp"

namespace pseudocurve {

template <class C>
class Series {
 public:
  explicit Series(int order = 0) : c_(std::max(order, 0)) {}

  static Series monomial(const C& value, int exponent, int order) {
    Series s(order);
    if (exponent < order) s.c_[exponent] = value;
    return s;
  }
  // z, known to the given order.
  static Series identity(int order) { return monomial(C(1), 1, order); }
  static Series constant(const C& value, int order) { return monomial(value, 0, order); }

  int order() const { return static_cast<int>(c_.size()); }

  // Lowest exponent with a nonzero coefficient, or order() if none is known.
  int valuation() const {
    for (int k = 0; k < order(); ++k)
      if (!c_[k].is_zero()) return k;
    return order();
  }
  bool is_zero() const { return valuation() == order(); }

  const C& coeff(int k) const {
    if (k < 0 || k >= order()) throw std::out_of_range("coefficient beyond truncation order");
    return c_[k];
  }
  void set(int k, C value) {
    if (k < 0 || k >= order()) throw std::out_of_range("coefficient beyond truncation order");
    c_[k] = std::move(value);
  }

  // Nonzero (exponent, value) pairs in increasing exponent order.
  std::vector<std::pair<int, C>> terms() const {
    std::vector<std::pair<int, C>> out;
    for (int k = 0; k < order(); ++k)
      if (!c_[k].is_zero()) out.emplace_back(k, c_[k]);
    return out;
  }

  Series truncated(int n) const {
    Series s(std::min(n, order()));
    std::copy(c_.begin(), c_.begin() + s.order(), s.c_.begin());
    return s;
  }

  // Extend the known part with zeros. Only legitimate when the caller knows the tail vanishes
  // (polynomial inputs).
  Series with_order(int n) const {
    Series s(n);
    for (int k = 0; k < std::min(n, order()); ++k) s.c_[k] = c_[k];
    return s;
  }

  Series operator-() const {
    Series s(*this);
    for (auto& x : s.c_) x = -x;
    return s;
  }

  friend Series operator+(const Series& a, const Series& b) {
    Series s(std::min(a.order(), b.order()));
    for (int k = 0; k < s.order(); ++k) s.c_[k] = a.c_[k] + b.c_[k];
    return s;
  }
  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

  friend Series operator*(const C& k, const Series& a) {
    Series s(a);
    for (auto& x : s.c_)
      if (!x.is_zero()) x = k * x;
    return s;
  }

  friend Series operator*(const Series& a, const Series& b) {
    const int va = a.valuation(), vb = b.valuation();
    const int n = std::min(a.order() + vb, b.order() + va);
    Series s(n);
    for (int i = va; i < a.order() && i < n; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (int j = vb; j < b.order() && i + j < n; ++j) {
        if (b.c_[j].is_zero()) continue;
        s.c_[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return s;
  }

  friend bool operator==(const Series& a, const Series& b) {
    if (a.order() != b.order()) return false;
    for (int k = 0; k < a.order(); ++k)
      if (!(a.c_[k] - b.c_[k]).is_zero()) return false;
    return true;
  }
  friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

  // True when both agree on every exponent below min(order(a), order(b)).
  friend bool agree(const Series& a, const Series& b) {
    const int n = std::min(a.order(), b.order());
    for (int k = 0; k < n; ++k)
      if (!(a.c_[k] - b.c_[k]).is_zero()) return false;
    return true;
  }

  // Multiply by z^k.
  Series shifted_up(int k) const {
    Series s(order() + k);
    for (int i = 0; i < order(); ++i) s.c_[i + k] = c_[i];
    return s;
  }
  // Divide by z^k; the first k coefficients must vanish.
  Series shifted_down(int k) const {
    if (valuation() < k) throw ValuationError("series not divisible by z^" + std::to_string(k));
    Series s(order() - k);
    for (int i = k; i < order(); ++i) s.c_[i - k] = c_[i];
    return s;
  }

  // f(s z) for a scalar s.
  Series scaled_argument(const C& s) const {
    Series out(order());
    C p(1);
    for (int k = 0; k < order(); ++k) {
      if (!c_[k].is_zero()) out.c_[k] = c_[k] * p;
      p = p * s;
    }
    return out;
  }

  // f(z^m).
  Series substitute_power(int m) const {
    Series out(order() == 0 ? 0 : (order() - 1) * m + 1);
    for (int k = 0; k < order(); ++k) out.c_[k * m] = c_[k];
    return out;
  }

  // f(g); g must vanish at 0.
  Series compose(const Series& g) const {
    if (g.order() == 0 || !g.c_[0].is_zero()) throw ValuationError("inner series must vanish at 0");
    const int v = g.valuation();
    const long big = std::numeric_limits<int>::max();
    long n = static_cast<long>(v) * order();
    for (int k = 1; k < order(); ++k)
      if (!c_[k].is_zero()) {
        n = std::min<long>(n, g.order() + static_cast<long>(v) * (k - 1));
        break;
      }
    n = std::min(n, big);
    const int r = static_cast<int>(n);
    Series out(r);
    if (r > 0 && order() > 0) out.c_[0] = c_[0];
    Series power = Series::constant(C(1), r);
    const Series gr = g.truncated_or_extended(r);
    for (int k = 1; k < order() && static_cast<long>(v) * k < r; ++k) {
      power = (power * gr).truncated(r);
      if (c_[k].is_zero()) continue;
      for (int j = 0; j < power.order(); ++j)
        if (!power.c_[j].is_zero()) out.c_[j] += c_[k] * power.c_[j];
    }
    return out;
  }

  // f^alpha for f(0) = 1.
  Series pow(const mpq_class& alpha) const {
    if (order() == 0 || !(c_[0] - C(1)).is_zero()) throw UnitError("rational power needs constant term 1");
    Series g(order());
    g.c_[0] = C(1);
    const C a1(mpq_class(alpha + 1));
    for (int k = 1; k < order(); ++k) {
      C acc(0);
      for (int j = 1; j <= k; ++j) {
        if (c_[j].is_zero() || g.c_[k - j].is_zero()) continue;
        acc += (a1 * C(static_cast<long>(j)) - C(static_cast<long>(k))) * c_[j] * g.c_[k - j];
      }
      g.c_[k] = acc / C(static_cast<long>(k));
    }
    return g;
  }

  Series nth_root(int n) const {
    if (n <= 0) throw std::invalid_argument("root degree must be positive");
    return pow(mpq_class(1, n));
  }

  // g with f(g(z)) = z + O(z^N), by Lagrange inversion.
  Series comp_inverse() const {
    if (valuation() != 1) throw ValuationError("compositional inverse needs valuation exactly 1");
    const int n = order();
    const C lead = c_[1];
    Series q = shifted_down(1);  // f/z, order n-1
    const C inv_lead = C(1) / lead;
    q = inv_lead * q;
    Series h = inv_lead * q.pow(mpq_class(-1));  // z/f(z)
    Series g(n);
    Series hk = Series::constant(C(1), h.order());
    for (int k = 1; k < n; ++k) {
      hk = (hk * h).truncated(h.order());
      g.c_[k] = hk.c_[k - 1] / C(static_cast<long>(k));
    }
    return g;
  }

  Series derivative() const {
    Series d(std::max(order() - 1, 0));
    for (int k = 1; k < order(); ++k)
      if (!c_[k].is_zero()) d.c_[k - 1] = C(static_cast<long>(k)) * c_[k];
    return d;
  }

  // Map coefficients into another field.
  template <class D, class F>
  Series<D> map(F&& f) const {
    Series<D> s(order());
    for (int k = 0; k < order(); ++k)
      if (!c_[k].is_zero()) s.set(k, f(c_[k]));
    return s;
  }

 private:
  Series truncated_or_extended(int n) const {
    // Unknown tail of g enters compose's order bound separately, so padding is safe here.
    Series s(n);
    for (int k = 0; k < std::min(n, order()); ++k) s.c_[k] = c_[k];
    return s;
  }

  std::vector<C> c_;
};

using TruncatedSeries = Series<QComplex>;

// Convenience wrappers named after the operations they implement.
inline TruncatedSeries ps_add(const TruncatedSeries& a, const TruncatedSeries& b) { return a + b; }
inline TruncatedSeries ps_mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }
inline TruncatedSeries ps_compose(const TruncatedSeries& f, const TruncatedSeries& g) { return f.compose(g); }
inline TruncatedSeries ps_nth_root(const TruncatedSeries& f, int n) { return f.nth_root(n); }
inline TruncatedSeries ps_comp_inverse(const TruncatedSeries& f) { return f.comp_inverse(); }

// Build from {exponent, value} pairs.
TruncatedSeries make_series(std::initializer_list<std::pair<int, QComplex>> terms, int order);
std::string to_string(const TruncatedSeries& s);

}  // namespace pseudocurve
