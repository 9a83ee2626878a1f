#include "pseudocurve/series.hpp"

#include <sstream>

namespace pseudocurve {

TruncatedSeries make_series(std::initializer_list<std::pair<int, QComplex>> terms, int order) {
  TruncatedSeries s(order);
  for (const auto& [k, v] : terms)
    if (k < order) s.set(k, s.coeff(k) + v);
  return s;
}

std::string to_string(const TruncatedSeries& s) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : s.terms()) {
    if (!first) os << " + ";
    first = false;
    os << v;
    if (k > 0) os << "*z^" << k;
  }
  if (first) os << "0";
  os << " + O(z^" << s.order() << ")";
  return os.str();
}

}  // namespace pseudocurve
