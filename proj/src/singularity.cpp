#include "pseudocurve/singularity.hpp"

#include <numeric>
#include <sstream>

#include "pseudocurve/errors.hpp"

namespace pseudocurve {

int CurveGerm::order() const {
  int n = components.empty() ? 0 : components[0].order();
  for (const auto& c : components) n = std::min(n, c.order());
  return n;
}

void CurveGerm::check() const {
  if (dim() < 2) throw DimensionError("a curve germ needs at least two coordinates");
  for (const auto& c : components)
    if (c.order() > 0 && !c.coeff(0).is_zero()) throw ValuationError("germ must pass through the origin");
}

CurveGerm CurveGerm::compose(const TruncatedSeries& phi) const {
  CurveGerm h;
  for (const auto& c : components) h.components.push_back(c.compose(phi));
  return h;
}

CurveGerm CurveGerm::truncated(int n) const {
  CurveGerm h;
  for (const auto& c : components) h.components.push_back(c.truncated(n));
  return h;
}

QVector CurveGerm::coefficients(int k) const {
  QVector v;
  for (const auto& c : components) v.push_back(k < c.order() ? c.coeff(k) : QComplex());
  return v;
}

bool CurveGerm::same_terms(const CurveGerm& o) const {
  if (dim() != o.dim()) return false;
  for (int j = 0; j < dim(); ++j) {
    auto a = components[j].terms(), b = o.components[j].terms();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].first != b[i].first || a[i].second != b[i].second) return false;
  }
  return true;
}

std::pair<int, QVector> multiplicity(const CurveGerm& g) {
  const int n = g.order();
  int mu = n;
  for (const auto& c : g.components) mu = std::min(mu, c.valuation());
  if (mu >= n) throw ZeroGermError("germ vanishes to truncation order " + std::to_string(n));
  return {mu, g.coefficients(mu)};
}

std::pair<CurveGerm, TruncatedSeries> normalize_first(const CurveGerm& g) {
  g.check();
  const auto [mu, v0] = multiplicity(g);
  const int n = g.order();
  const TruncatedSeries first = g.components[0].truncated(n);
  if (first.valuation() != mu)
    throw ValuationError("first component has valuation " + std::to_string(first.valuation()) +
                         " above the multiplicity " + std::to_string(mu));
  if (first.coeff(mu) != QComplex(1))
    throw UnitError("first component must start with exactly z^mu; rotate coordinates first");
  // first = (z * U^{1/mu})^mu, so phi = inverse of z * U^{1/mu}.
  const TruncatedSeries rho = first.shifted_down(mu).nth_root(mu).shifted_up(1);
  const TruncatedSeries phi = rho.comp_inverse();
  CurveGerm h = g.truncated(n).compose(phi);
  const TruncatedSeries expect = TruncatedSeries::monomial(1, mu, h.components[0].order());
  if (h.components[0] != expect) throw std::logic_error("normalization failed to produce z^mu");
  return {h, phi};
}

Shear shear_for(const QVector& v0) {
  Shear s;
  s.v0 = v0;
  while (s.pivot < static_cast<int>(v0.size()) && v0[s.pivot].is_zero()) ++s.pivot;
  if (s.pivot == static_cast<int>(v0.size())) throw ZeroGermError("zero tangent vector");
  return s;
}

// New coordinates: w'_0 = w_p / v_p, then w_j - (v_j/v_p) w_p for j != p in order.
CurveGerm Shear::apply(const CurveGerm& g) const {
  const QComplex vp = v0[pivot];
  CurveGerm h;
  h.components.push_back(QComplex(1) / vp * g.components[pivot]);
  for (int j = 0; j < g.dim(); ++j)
    if (j != pivot) h.components.push_back(g.components[j] - (v0[j] / vp) * g.components[pivot]);
  return h;
}

CurveGerm Shear::unapply(const CurveGerm& h) const {
  CurveGerm g;
  g.components.resize(h.dim(), TruncatedSeries(h.order()));
  const TruncatedSeries wp = v0[pivot] * h.components[0];
  g.components[pivot] = wp;
  int i = 1;
  for (int j = 0; j < h.dim(); ++j)
    if (j != pivot) g.components[j] = h.components[i++] + (v0[j] / v0[pivot]) * wp;
  return g;
}

namespace {

struct Normalized {
  CurveGerm h;  // sheared and reparametrized
  TruncatedSeries phi;
};

Normalized normalize_any(const CurveGerm& g) {
  g.check();
  const auto v0 = multiplicity(g).second;
  const Shear s = shear_for(v0);
  auto [h, phi] = normalize_first(s.apply(g));
  return {h, phi};
}

SingularityType scan_exponents(const CurveGerm& h, int mu) {
  SingularityType t;
  t.exponents = {mu};
  t.divisors = {mu};
  int d = mu;
  const int n = h.order();
  for (int k = mu + 1; k < n && d > 1; ++k) {
    bool occurs = false;
    for (const auto& c : h.components) occurs = occurs || !c.coeff(k).is_zero();
    if (!occurs) continue;
    const int e = std::gcd(d, k);
    if (e < d) {
      t.exponents.push_back(k);
      t.divisors.push_back(e);
      d = e;
    }
  }
  if (d != 1)
    throw TruncationError("gcd of exponents is still " + std::to_string(d) + " at truncation order " +
                          std::to_string(n) + "; germ may be multiple");
  return t;
}

}  // namespace

SingularityType characteristic_exponents(const CurveGerm& g) {
  const auto mu = multiplicity(g).first;
  return scan_exponents(normalize_any(g).h, mu);
}

PuiseuxSequence puiseux_sequence(const CurveGerm& g) {
  const auto mu = multiplicity(g).first;
  const Normalized nz = normalize_any(g);
  PuiseuxSequence ps;
  ps.type = scan_exponents(nz.h, mu);
  ps.reparam = nz.phi;
  // A linear change of coordinates preserves exponents, so each stage is a truncation of g o phi.
  ps.reparametrized = g.truncated(g.order()).compose(nz.phi);
  const int l = ps.type.length();
  for (int i = 0; i <= l; ++i) {
    PuiseuxStage st;
    st.divisor = ps.type.divisors[i];
    st.exponent = ps.type.exponents[i];
    st.leading = ps.reparametrized.coefficients(st.exponent);
    const int cut = i < l ? ps.type.exponents[i + 1] : ps.reparametrized.order();
    const int d = st.divisor;
    for (const auto& c : ps.reparametrized.components) {
      TruncatedSeries s((c.order() + d - 1) / d);
      for (const auto& [k, v] : c.terms()) {
        if (k >= cut) break;
        if (k % d != 0) throw std::logic_error("stage exponent not divisible by its divisor");
        s.set(k / d, v);
      }
      st.germ.components.push_back(s);
    }
    ps.stages.push_back(st);
  }
  return ps;
}

int cusp_index_formula(const SingularityType& t) {
  long twice = 0;
  for (int i = 1; i <= t.length(); ++i)
    twice += static_cast<long>(t.divisors[i - 1] - t.divisors[i]) * (t.exponents[i] - 1);
  if (twice % 2 != 0) throw ParityError("cusp index sum is odd; invalid type");
  return static_cast<int>(twice / 2);
}

TypeValidation validate_type(const std::vector<int>& p) {
  TypeValidation r;
  if (p.empty()) {
    r.violated = "empty exponent list";
    return r;
  }
  if (p[0] <= 1) {
    r.violated = "p0 must exceed 1";
    return r;
  }
  SingularityType t;
  t.exponents = p;
  t.divisors = {p[0]};
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] <= p[i - 1]) {
      r.violated = "exponents must be strictly increasing (p" + std::to_string(i) + ")";
      return r;
    }
    const int d = std::gcd(t.divisors.back(), p[i]);
    if (d >= t.divisors.back()) {
      r.violated = "divisor chain not strictly decreasing at d" + std::to_string(i) + " = " +
                   std::to_string(d);
      return r;
    }
    t.divisors.push_back(d);
  }
  if (t.divisors.back() != 1) {
    r.violated = "final gcd " + std::to_string(t.divisors.back()) + " is not 1";
    return r;
  }
  r.type = t;
  return r;
}

SingularityType make_type(const std::vector<int>& p) {
  auto v = validate_type(p);
  if (!v.type) throw ParseError("invalid singularity type: " + v.violated);
  return *v.type;
}

CurveGerm realize_type(const SingularityType& t, const std::vector<QVector>& vectors, int truncation) {
  if (vectors.size() != t.exponents.size())
    throw LengthError("need " + std::to_string(t.exponents.size()) + " vectors, got " +
                      std::to_string(vectors.size()));
  const std::size_t n = vectors[0].size();
  if (n < 2) throw DimensionError("vectors must have at least two coordinates");
  for (const auto& v : vectors)
    if (v.size() != n) throw LengthError("vectors of unequal dimension");
  bool nonzero = false;
  for (const auto& c : vectors[0]) nonzero = nonzero || !c.is_zero();
  if (!nonzero) throw OrthogonalityError("v0 must be nonzero");
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    QComplex dot;
    for (std::size_t k = 0; k < n; ++k) dot += vectors[i][k] * vectors[0][k].conj();
    if (!dot.is_zero()) throw OrthogonalityError("v" + std::to_string(i) + " is not orthogonal to v0");
  }
  const int order = truncation > 0 ? truncation : std::max(64, t.exponents.back() + 1);
  CurveGerm g;
  for (std::size_t k = 0; k < n; ++k) {
    TruncatedSeries s(order);
    for (std::size_t i = 0; i < vectors.size(); ++i)
      if (t.exponents[i] < order) s.set(t.exponents[i], s.coeff(t.exponents[i]) + vectors[i][k]);
    g.components.push_back(s);
  }
  return g;
}

std::pair<int, QVector> compare_germs(const CurveGerm& a, const CurveGerm& b) {
  if (a.dim() != b.dim()) throw DimensionError("germs of different dimension");
  CurveGerm d;
  for (int j = 0; j < a.dim(); ++j) d.components.push_back(a.components[j] - b.components[j]);
  const int n = d.order();
  int nu = n;
  for (const auto& c : d.components) nu = std::min(nu, c.valuation());
  if (nu >= n) throw EqualError("germs agree to truncation order " + std::to_string(n));
  return {nu, d.coefficients(nu)};
}

CycloSeries to_cyclo(const TruncatedSeries& s, const std::shared_ptr<const CyclotomicField>& f) {
  return s.map<Cyclotomic>([&](const QComplex& c) { return Cyclotomic(f, c); });
}

SymmetrizedReparam symmetrize_reparam(const TruncatedSeries& psi, int d) {
  if (d < 2) throw std::invalid_argument("symmetrization needs d >= 2");
  if (psi.valuation() != 1 || psi.coeff(1) != QComplex(1))
    throw ValuationError("psi must be z + O(z^2)");
  SymmetrizedReparam out;
  const int m = std::lcm(4, d);
  out.field = cyclotomic_field(m);
  out.eta = Cyclotomic::zeta_power(out.field, m / d);
  const CycloSeries p = to_cyclo(psi, out.field);
  const int n = psi.order();

  auto residual = [&](const CycloSeries& phi) {
    return out.eta * phi - p.compose(phi.scaled_argument(out.eta));
  };

  CycloSeries phi = CycloSeries::identity(n);
  std::vector<Cyclotomic> eta_pow(n + 1, Cyclotomic(1));
  for (int k = 1; k <= n; ++k) eta_pow[k] = eta_pow[k - 1] * out.eta;
  for (int k = 2; k < n; ++k) {
    if (k % d == 1) continue;  // H_1 direction: left for gamma
    const CycloSeries r = residual(phi.truncated(k + 1).with_order(k + 1));
    const Cyclotomic known = r.coeff(k);
    phi.set(k, -known / (out.eta - eta_pow[k]));
  }
  const CycloSeries r = residual(phi);
  const int gorder = std::max(0, (r.order() - 2) / d);
  out.gamma = CycloSeries(gorder);
  for (int k = 0; k < r.order(); ++k) {
    if (r.coeff(k).is_zero()) continue;
    if (k % d != 1 || k < d + 1) throw std::logic_error("symmetrization left a term outside z^{d+1} gamma(z^d)");
    out.gamma.set((k - 1) / d - 1, r.coeff(k));
  }
  out.phi = phi;
  return out;
}

}  // namespace pseudocurve
