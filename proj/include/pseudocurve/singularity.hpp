#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudocurve/cyclotomic.hpp"
#include "pseudocurve/series.hpp"

namespace pseudocurve {

using QVector = std::vector<QComplex>;

// Germ of a parametrized curve at the origin of C^n, one series per coordinate.
struct CurveGerm {
  std::vector<TruncatedSeries> components;

  CurveGerm() = default;
  explicit CurveGerm(std::vector<TruncatedSeries> c) : components(std::move(c)) {}

  int dim() const { return static_cast<int>(components.size()); }
  // Common usable truncation order.
  int order() const;
  // Throws if the germ has fewer than two coordinates or a nonzero constant term.
  void check() const;
  CurveGerm compose(const TruncatedSeries& phi) const;
  CurveGerm truncated(int n) const;
  // Coefficient vector at exponent k.
  QVector coefficients(int k) const;
  // Structural equality of the known coefficients (orders ignored).
  bool same_terms(const CurveGerm& o) const;
};

struct SingularityType {
  std::vector<int> exponents;  // p_0 < p_1 < ... < p_l
  std::vector<int> divisors;   // d_i = gcd(p_0..p_i)
  int length() const { return static_cast<int>(exponents.size()) - 1; }
};

struct PuiseuxStage {
  CurveGerm germ;     // u_i, in the variable z^{1/d_i}
  int divisor = 1;    // d_i
  int exponent = 0;   // p_i
  QVector leading;    // v_i, coefficient of z^{p_i} in g o phi
};

struct PuiseuxSequence {
  SingularityType type;
  std::vector<PuiseuxStage> stages;
  TruncatedSeries reparam;  // phi(z) = z + O(z^2)
  CurveGerm reparametrized; // g o phi
};

std::pair<int, QVector> multiplicity(const CurveGerm& g);

// h = g o phi with first component exactly z^mu.
std::pair<CurveGerm, TruncatedSeries> normalize_first(const CurveGerm& g);

// Exact linear change of coordinates A (and its inverse) with A v0 = e_1.
struct Shear {
  int pivot = 0;
  QVector v0;
  CurveGerm apply(const CurveGerm& g) const;
  CurveGerm unapply(const CurveGerm& g) const;
};
Shear shear_for(const QVector& v0);

SingularityType characteristic_exponents(const CurveGerm& g);
PuiseuxSequence puiseux_sequence(const CurveGerm& g);

int cusp_index_formula(const SingularityType& t);

CurveGerm realize_type(const SingularityType& t, const std::vector<QVector>& vectors, int truncation = 0);

struct TypeValidation {
  std::optional<SingularityType> type;
  std::string violated;  // empty when accepted
};
TypeValidation validate_type(const std::vector<int>& exponents);
// Same, throwing ParseError naming the violated clause.
SingularityType make_type(const std::vector<int>& exponents);

std::pair<int, QVector> compare_germs(const CurveGerm& a, const CurveGerm& b);

using CycloSeries = Series<Cyclotomic>;
struct SymmetrizedReparam {
  std::shared_ptr<const CyclotomicField> field;  // Q(zeta_m), m = lcm(4, d)
  Cyclotomic eta;                                // primitive d-th root of unity
  CycloSeries phi;
  CycloSeries gamma;
};
// phi with eta*phi(z) - psi(phi(eta z)) = z^{d+1} gamma(z^d).
SymmetrizedReparam symmetrize_reparam(const TruncatedSeries& psi, int d);

CycloSeries to_cyclo(const TruncatedSeries& s, const std::shared_ptr<const CyclotomicField>& f);

}  // namespace pseudocurve
