#include "pseudocurve/rational.hpp"

#include <cctype>

#include "pseudocurve/errors.hpp"

namespace pseudocurve {

QComplex& QComplex::operator/=(const QComplex& o) {
  const mpq_class n = o.norm2();
  if (sgn(n) == 0) throw std::domain_error("division by exact zero");
  mpq_class r = (re * o.re + im * o.im) / n;
  im = (im * o.re - re * o.im) / n;
  re = std::move(r);
  return *this;
}

std::ostream& operator<<(std::ostream& os, const QComplex& c) {
  if (sgn(c.im) == 0) return os << c.re;
  if (sgn(c.re) == 0) return os << c.im << "i";
  return os << "(" << c.re << (sgn(c.im) > 0 ? "+" : "") << c.im << "i)";
}

mpq_class parse_rational(const std::string& s) {
  const auto bad = [&] { return ParseError("not an exact rational \"p/q\": '" + s + "'"); };
  if (s.empty()) throw bad();
  std::size_t slash = s.find('/');
  auto digits_ok = [](const std::string& t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw bad();
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

std::string format_rational(const mpq_class& q) { return q.get_str(10); }

}  // namespace pseudocurve
