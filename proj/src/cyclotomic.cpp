#include "pseudocurve/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pseudocurve {
namespace {

using Poly = std::vector<mpq_class>;

void trim(Poly& p) {
  while (p.size() > 1 && sgn(p.back()) == 0) p.pop_back();
}

// Quotient and remainder of a by a nonzero b.
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  if (static_cast<int>(a.size()) - 1 < db) return {Poly{0}, a};
  Poly q(a.size() - b.size() + 1, mpq_class(0));
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    if (sgn(a[i]) == 0) continue;
    mpq_class c = a[i] / b[db];
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  a.resize(std::max(db, 1));
  trim(a);
  trim(q);
  return {q, a};
}

Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

Poly sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

bool is_zero_poly(const Poly& p) {
  for (const auto& c : p)
    if (sgn(c) != 0) return false;
  return true;
}

Poly cyclotomic_poly(int m) {
  Poly p(m + 1, mpq_class(0));
  p[0] = -1;
  p[m] = 1;
  for (int d = 1; d < m; ++d)
    if (m % d == 0) p = divmod(p, cyclotomic_poly(d)).first;
  return p;
}

}  // namespace

std::shared_ptr<const CyclotomicField> cyclotomic_field(int m) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const CyclotomicField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[m];
  if (!slot) {
    auto f = std::make_shared<CyclotomicField>();
    f->m = m;
    f->phi = cyclotomic_poly(m);
    slot = f;
  }
  return slot;
}

Cyclotomic::Cyclotomic(std::shared_ptr<const CyclotomicField> f, const QComplex& z) {
  if (f->m % 4 != 0) throw std::invalid_argument("Gaussian rationals need 4 | m");
  *this = Cyclotomic(z.re) + Cyclotomic(z.im) * zeta_power(f, f->m / 4);
}

Cyclotomic Cyclotomic::zeta_power(std::shared_ptr<const CyclotomicField> f, long k) {
  k %= f->m;
  if (k < 0) k += f->m;
  Poly x(k + 1, mpq_class(0));
  x[k] = 1;
  Poly r = divmod(x, f->phi).second;
  r.resize(f->degree(), mpq_class(0));
  return Cyclotomic(f, r);
}

bool Cyclotomic::is_zero() const { return is_zero_poly(a_); }

Cyclotomic Cyclotomic::promoted(const std::shared_ptr<const CyclotomicField>& f) const {
  if (f_ || !f) return *this;
  Poly a(f->degree(), mpq_class(0));
  a[0] = a_[0];
  return Cyclotomic(f, a);
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r(*this);
  for (auto& c : r.a_) c = -c;
  return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  if (f_ && o.f_ && f_ != o.f_) throw std::invalid_argument("mixing cyclotomic fields");
  if (!f_ && o.f_) *this = promoted(o.f_);
  const Cyclotomic b = o.promoted(f_);
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += b.a_[i];
  return *this;
}

Cyclotomic operator*(const Cyclotomic& x, const Cyclotomic& y) {
  if (x.f_ && y.f_ && x.f_ != y.f_) throw std::invalid_argument("mixing cyclotomic fields");
  const auto f = x.f_ ? x.f_ : y.f_;
  if (!f) return Cyclotomic(x.a_[0] * y.a_[0]);
  const Cyclotomic a = x.promoted(f), b = y.promoted(f);
  Poly r = divmod(mul(a.a_, b.a_), f->phi).second;
  r.resize(f->degree(), mpq_class(0));
  return Cyclotomic(f, r);
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero in cyclotomic field");
  if (!f_) return Cyclotomic(mpq_class(1 / a_[0]));
  // Extended Euclid: find s with s*a = 1 mod phi.
  Poly r0 = f_->phi, r1 = a_;
  trim(r1);
  Poly s0{0}, s1{1};
  while (!(r1.size() == 1)) {
    auto [q, r] = divmod(r0, r1);
    Poly s = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  mpq_class c = r1[0];
  for (auto& v : s1) v /= c;
  Poly s = divmod(s1, f_->phi).second;
  s.resize(f_->degree(), mpq_class(0));
  return Cyclotomic(f_, s);
}

Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inverse(); }

std::complex<double> Cyclotomic::to_complex() const {
  if (!f_) return {a_[0].get_d(), 0.0};
  std::complex<double> z = 0, p = 1;
  const std::complex<double> zeta = std::polar(1.0, 2 * std::numbers::pi / f_->m);
  for (const auto& c : a_) {
    z += c.get_d() * p;
    p *= zeta;
  }
  return z;
}

std::optional<QComplex> Cyclotomic::to_gaussian() const {
  if (!f_) return QComplex(a_[0]);
  if (f_->m % 4 != 0) {
    // Only rationals are certainly Gaussian here.
    for (std::size_t i = 1; i < a_.size(); ++i)
      if (sgn(a_[i]) != 0) return std::nullopt;
    return QComplex(a_[0]);
  }
  const Cyclotomic iota = zeta_power(f_, f_->m / 4);
  // Express as x + y*iota: pick a coordinate where iota is nonzero (other than the constant).
  std::size_t j = 0;
  for (std::size_t i = 1; i < iota.a_.size(); ++i)
    if (sgn(iota.a_[i]) != 0) { j = i; break; }
  mpq_class y = j ? mpq_class(a_[j] / iota.a_[j]) : mpq_class(0);
  mpq_class x = a_[0] - y * iota.a_[0];
  Cyclotomic back = Cyclotomic(x) + Cyclotomic(y) * iota;
  if (!(back - *this).is_zero()) return std::nullopt;
  return QComplex(x, y);
}

}  // namespace pseudocurve
