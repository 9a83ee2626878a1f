#include "pseudocurve/acs.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <random>

#include "pseudocurve/errors.hpp"
#include "pseudocurve/operators.hpp"

namespace pseudocurve {

using nlohmann::json;

RealMatrix standard_j(int n) {
  RealMatrix j = RealMatrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    j(2 * k, 2 * k + 1) = -1;
    j(2 * k + 1, 2 * k) = 1;
  }
  return j;
}

RealVector to_real(const ComplexVector& w) {
  RealVector x(2 * w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    x(2 * k) = w(k).real();
    x(2 * k + 1) = w(k).imag();
  }
  return x;
}

ComplexVector to_complex(const RealVector& x) {
  ComplexVector w(x.size() / 2);
  for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = cplx(x(2 * k), x(2 * k + 1));
  return w;
}

// (a + ib) conj(x + iy) = (ax + by) + i(bx - ay)
RealMatrix antilinear_to_real(const ComplexMatrix& m) {
  RealMatrix a(2 * m.rows(), 2 * m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double re = m(r, c).real(), im = m(r, c).imag();
      a(2 * r, 2 * c) = re;
      a(2 * r, 2 * c + 1) = im;
      a(2 * r + 1, 2 * c) = im;
      a(2 * r + 1, 2 * c + 1) = -re;
    }
  return a;
}

ComplexMatrix antilinear_from_real(const RealMatrix& a) {
  ComplexMatrix m(a.rows() / 2, a.cols() / 2);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = cplx((a(2 * r, 2 * c) - a(2 * r + 1, 2 * c + 1)) / 2, (a(2 * r, 2 * c + 1) + a(2 * r + 1, 2 * c)) / 2);
  return m;
}

namespace {

constexpr double kSingularRcond = 1e-12;

Eigen::FullPivLU<RealMatrix> checked_lu(const RealMatrix& s, const char* what) {
  Eigen::FullPivLU<RealMatrix> lu(s);
  if (!lu.isInvertible() || lu.rcond() < kSingularRcond) throw SingularError(std::string(what) + " is singular");
  return lu;
}

double op_norm(const RealMatrix& d) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(d.transpose() * d, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

RealMatrix q_bar_of(const RealMatrix& j) {
  const RealMatrix js = standard_j(static_cast<int>(j.rows() / 2));
  RealMatrix q = checked_lu(j + js, "J + J_st").solve(js - j);
  const double anti = (q * js + js * q).norm();
  if (anti > 1e-9 * std::max(1.0, q.norm()))
    throw DomainError("Qbar does not anticommute with J_st (residual " + std::to_string(anti) + ")");
  return q;
}

RealMatrix j_of_q_bar(const RealMatrix& q_bar) {
  const auto n = q_bar.rows();
  const RealMatrix id = RealMatrix::Identity(n, n);
  const RealMatrix js = standard_j(static_cast<int>(n / 2));
  // J = J_st (Id - Qbar)(Id + Qbar)^{-1}, i.e. J^T = (Id + Qbar)^{-T} ((Id - Qbar)^T J_st^T).
  auto lu = checked_lu((id + q_bar).transpose(), "Id + Qbar");
  return lu.solve((js * (id - q_bar)).transpose()).transpose();
}

StructureField::StructureField(int dim, Eval eval, std::string label, std::optional<double> lipschitz_hint)
    : dim_(dim), eval_(std::move(eval)), label_(std::move(label)), hint_(lipschitz_hint) {
  if (dim <= 0 || dim % 2) throw DimensionError("structure dimension must be even and positive");
}

RealMatrix StructureField::operator()(const RealVector& x) const {
  if (x.size() != dim_) throw DimensionError("point has dimension " + std::to_string(x.size()) + ", expected " + std::to_string(dim_));
  RealMatrix j = eval_(x);
#ifndef NDEBUG
  const double res = (j * j + RealMatrix::Identity(dim_, dim_)).norm();
  if (res > 1e-10 * std::max(1.0, j.squaredNorm())) throw DomainError(label_ + ": J^2 != -Id at an evaluated point");
#endif
  return j;
}

QField::QField(int n, Eval eval, std::string label) : n_(n), eval_(std::move(eval)), label_(std::move(label)) {
  if (n <= 0) throw DimensionError("Q-field needs n >= 1");
}

ComplexMatrix QField::operator()(const ComplexVector& w) const {
  if (w.size() != n_) throw DimensionError("point has dimension " + std::to_string(w.size()) + ", expected " + std::to_string(n_));
  return eval_(w);
}

QField j_to_q(const StructureField& j) {
  return QField(j.n(), [j](const ComplexVector& w) { return antilinear_from_real(q_bar_of(j.at(w))); }, "Q[" + j.label() + "]");
}

StructureField q_to_j(const QField& q) {
  return StructureField(2 * q.n(), [q](const RealVector& x) { return j_of_q_bar(antilinear_to_real(q(to_complex(x)))); },
                        "J[" + q.label() + "]");
}

LipschitzReport lipschitz_profile(const StructureField& j, const Ball& region, long budget, std::uint64_t seed, int coarsest,
                                  int finest) {
  const int d = j.dim();
  if (region.center.size() != d) throw DimensionError("ball centre has the wrong dimension");
  const double big_r = region.radius;
  LipschitzReport rep;
  const int strata = finest - coarsest + 1;
  if (strata <= 0 || budget <= 0 || big_r <= 0) return rep;
  const long per = (budget + strata - 1) / strata;

  for (int s = coarsest; s <= finest; ++s) {
    const double h = std::ldexp(1.0, -s);
    LipschitzScale sc{h, 0, 0};
    if (h / 2 >= 2 * big_r) {
      rep.scales.push_back(sc);
      continue;
    }
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(ss);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0, 1);
    auto direction = [&] {
      RealVector v(d);
      for (int i = 0; i < d; ++i) v(i) = gauss(rng);
      return RealVector(v / v.norm());
    };
    const double rho_min = std::min(h / 16, big_r);
    for (long k = 0; k < per; ++k) {
      RealVector x, y;
      for (int attempt = 0;; ++attempt) {
        double rho = (k % 2) ? big_r * std::exp(unif(rng) * std::log(rho_min / big_r))
                             : big_r * std::pow(unif(rng), 1.0 / d);
        x = region.center + rho * direction();
        y = x + h * (0.5 + 0.5 * (1 - unif(rng))) * direction();
        if ((y - region.center).norm() <= big_r) break;
        if (attempt > 64) {
          y.resize(0);
          break;
        }
      }
      if (y.size() == 0) continue;
      const double q = op_norm(j(x) - j(y)) / (x - y).norm();
      sc.quotient = std::max(sc.quotient, q);
      ++sc.pairs;
    }
    rep.estimate = std::max(rep.estimate, sc.quotient);
    rep.scales.push_back(sc);
  }
  if (rep.scales.size() >= 5) {
    const double fine = rep.scales.back().quotient, coarse = rep.scales[rep.scales.size() - 5].quotient;
    rep.super_lipschitz = fine > 1.1 * coarse;
  }
  return rep;
}

double lipschitz_estimate(const StructureField& j, const Ball& region, long budget, std::uint64_t seed) {
  return lipschitz_profile(j, region, budget, seed).estimate;
}

GridFunction cr_residual(const StructureField& j, const GridFunction& u) {
  if (j.dim() != 2 * u.dim())
    throw DimensionError("structure of dimension " + std::to_string(j.dim()) + " vs curve with " + std::to_string(u.dim()) +
                         " components");
  const auto [dx, dy] = real_partials(u);
  const int nr = u.n_radial(), na = u.n_angular(), n = u.dim();
  GridFunction out(u.grid(), 1);
  std::exception_ptr err;
#pragma omp parallel for schedule(static)
  for (int ir = 0; ir < nr; ++ir) {
    try {
      ComplexVector w(n), a(n), b(n);
      for (int it = 0; it < na; ++it) {
        for (int c = 0; c < n; ++c) {
          w(c) = u.at(ir, it, c);
          a(c) = dx.at(ir, it, c);
          b(c) = dy.at(ir, it, c);
        }
        out.at(ir, it, 0) = (to_real(a) + j.at(w) * to_real(b)).norm();
      }
    } catch (...) {
#pragma omp critical
      err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

StructureField standard_structure(int n) {
  RealMatrix js = standard_j(n);
  return StructureField(2 * n, [js](const RealVector&) { return js; }, "standard", 0.0);
}

QField example_2_3_q() {
  return QField(2, [](const ComplexVector& w) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(1, 0) = 2.0 * std::conj(w(0));
    return m;
  }, "example_2_3");
}

StructureField example_2_3(int mu) {
  if (mu < 1) throw DomainError("example_2_3 needs mu >= 1");
  // The same Q serves every mu: the curve (z^mu, zbar^{2mu}) only reparametrizes the mu = 1 case.
  QField q = example_2_3_q();
  return StructureField(4, [q](const RealVector& x) { return j_of_q_bar(antilinear_to_real(q(to_complex(x)))); },
                        "example_2_3(mu=" + std::to_string(mu) + ")");
}

StructureField example_9_1(int k) {
  if (k < 1) throw DomainError("example_9_1 needs k >= 1");
  // v = d/dx1 + g(x2) d/dx2 with g(x2) = k x2 (-ln x2)^{(k+1)/k}, the slope of x2 = exp(-1/x1^k)
  // written through x2. J d/dx2 = d/dy2 and J v = d/dy1.
  return StructureField(4, [k](const RealVector& x) {
    const double x2 = x(2);
    if (x2 >= 1) throw DomainError("example_9_1 is defined only for x2 < 1");
    const double g = x2 > 0 ? k * x2 * std::pow(-std::log(x2), (k + 1.0) / k) : 0.0;
    RealMatrix j = RealMatrix::Zero(4, 4);
    j(1, 0) = 1;
    j(3, 0) = -g;
    j(0, 1) = -1;
    j(2, 1) = -g;
    j(3, 2) = 1;
    j(2, 3) = -1;
    return j;
  }, "example_9_1(k=" + std::to_string(k) + ")");
}

QField example_9_2_q() {
  return QField(2, [](const ComplexVector& w) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    if (w(1) != 0.0) m(0, 1) = w(1) * w(1) / std::conj(w(1));
    return m;
  }, "example_9_2");
}

StructureField example_9_2() {
  // Qbar is nilpotent here, so J = J_st (Id - 2 Qbar): coupling blocks 2[[v2, -v1], [-v1, -v2]]
  // with v = w2^2 / conj(w2). It annihilates z -> (z^2 ln|z|^2, z).
  QField q = example_9_2_q();
  return StructureField(4, [q](const RealVector& x) { return j_of_q_bar(antilinear_to_real(q(to_complex(x)))); },
                        "example_9_2");
}

StructureField dilated(const StructureField& base, double t, double mu) {
  if (!(t > 0)) throw DomainError("dilation factor must be positive");
  const double s = std::pow(t, mu);
  std::optional<double> hint;
  if (base.lipschitz_hint()) hint = *base.lipschitz_hint() * s;
  return StructureField(base.dim(), [base, s](const RealVector& x) { return base(RealVector(s * x)); },
                        "dilated(" + base.label() + ",t=" + std::to_string(t) + ",mu=" + std::to_string(mu) + ")", hint);
}

StructureField builtin(const std::string& name, const json& params) {
  const json p = params.is_null() ? json::object() : params;
  try {
    if (name == "standard") return standard_structure(p.value("n", 2));
    if (name == "example_2_3") return example_2_3(p.value("mu", 1));
    if (name == "example_9_1") return example_9_1(p.value("k", 1));
    if (name == "example_9_2") return example_9_2();
    if (name == "dilated") {
      if (!p.contains("base") || !p.contains("t")) throw ParseError("dilated needs params base and t");
      return dilated(structure_from_json(p.at("base")), p.at("t").get<double>(), p.value("mu", 1.0));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad structure params: ") + e.what());
  }
  throw UnknownName("unknown built-in structure '" + name + "'");
}

QField polynomial_q_from_json(const json& spec) {
  struct Term {
    cplx coef;
    std::vector<int> a, b;
  };
  struct Entry {
    int row, col;
    std::vector<Term> terms;
  };
  try {
    const int n = spec.at("n").get<int>();
    if (n < 1) throw ParseError("q_matrix_polynomials: n must be positive");
    std::vector<Entry> entries;
    for (const auto& e : spec.at("entries")) {
      Entry en{e.at("row").get<int>(), e.at("col").get<int>(), {}};
      if (en.row < 0 || en.row >= n || en.col < 0 || en.col >= n) throw ParseError("q_matrix_polynomials: entry index out of range");
      for (const auto& t : e.at("terms")) {
        Term tm;
        const auto& c = t.at("coef");
        tm.coef = c.is_array() ? cplx(c.at(0).get<double>(), c.size() > 1 ? c.at(1).get<double>() : 0.0) : cplx(c.get<double>(), 0);
        tm.a = t.value("w", std::vector<int>(n, 0));
        tm.b = t.value("wbar", std::vector<int>(n, 0));
        if (static_cast<int>(tm.a.size()) != n || static_cast<int>(tm.b.size()) != n)
          throw ParseError("q_matrix_polynomials: exponent lists must have length n");
        for (int k = 0; k < n; ++k)
          if (tm.a[k] < 0 || tm.b[k] < 0) throw ParseError("q_matrix_polynomials: negative exponent");
        en.terms.push_back(std::move(tm));
      }
      entries.push_back(std::move(en));
    }
    return QField(n, [n, entries](const ComplexVector& w) {
      ComplexMatrix m = ComplexMatrix::Zero(n, n);
      for (const auto& e : entries)
        for (const auto& t : e.terms) {
          cplx v = t.coef;
          for (int k = 0; k < n; ++k) {
            for (int i = 0; i < t.a[k]; ++i) v *= w(k);
            for (int i = 0; i < t.b[k]; ++i) v *= std::conj(w(k));
          }
          m(e.row, e.col) += v;
        }
      return m;
    }, "polynomial");
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad q_matrix_polynomials: ") + e.what());
  }
}

StructureField structure_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("structure spec must be a JSON object");
  if (doc.contains("schema") && doc.at("schema") != 1) throw ParseError("unsupported structure schema");
  if (doc.contains("builtin")) {
    if (!doc.at("builtin").is_string()) throw ParseError("builtin must be a string");
    return builtin(doc.at("builtin").get<std::string>(), doc.value("params", json::object()));
  }
  if (doc.contains("q_matrix_polynomials")) return q_to_j(polynomial_q_from_json(doc.at("q_matrix_polynomials")));
  throw ParseError("structure spec needs 'builtin' or 'q_matrix_polynomials'");
}

StructureField load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open structure file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return structure_from_json(doc);
}

}  // namespace pseudocurve
