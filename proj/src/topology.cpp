#include "pseudocurve/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pseudocurve/errors.hpp"
#include "pseudocurve/kernels.hpp"

namespace pseudocurve {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }
Vec4 sub(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
Vec4 axpy(double s, const Vec4& x, const Vec4& y) { return {y[0] + s * x[0], y[1] + s * x[1], y[2] + s * x[2], y[3] + s * x[3]}; }
double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }
Vec4 scaled(const Vec4& a, double s) { return {a[0] * s, a[1] * s, a[2] * s, a[3] * s}; }

Vec4 to_vec4(cplx w1, cplx w2) { return {w1.real(), w1.imag(), w2.real(), w2.imag()}; }

double point_segment(const Vec4& p, const Vec4& a, const Vec4& b) {
  const Vec4 ab = sub(b, a);
  const double l2 = dot(ab, ab);
  double t = l2 > 0 ? dot(sub(p, a), ab) / l2 : 0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(sub(p, axpy(t, ab, a)));
}

// Closest distance between segments [p1, p2] and [q1, q2].
double segment_segment(const Vec4& p1, const Vec4& p2, const Vec4& q1, const Vec4& q2) {
  const Vec4 d1 = sub(p2, p1), d2 = sub(q2, q1), r = sub(p1, q1);
  const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
  double s = 0, t = 0;
  if (a <= 0 && e <= 0) return norm(r);
  if (a <= 0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e <= 0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2), den = a * e - b * b;
      s = den > 0 ? std::clamp((b * f - c * e) / den, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0) {
        t = 0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1) {
        t = 1;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return norm(sub(axpy(s, d1, p1), axpy(t, d2, q1)));
}

double polyline_distance(const std::vector<Vec4>& a, const std::vector<Vec4>& b) {
  const std::size_t na = a.size(), nb = b.size();
  std::vector<double> la(na), lb(nb);
  for (std::size_t i = 0; i < na; ++i) la[i] = norm(sub(a[(i + 1) % na], a[i]));
  for (std::size_t j = 0; j < nb; ++j) lb[j] = norm(sub(b[(j + 1) % nb], b[j]));
  double best = kInf;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      // Cheap lower bound before the exact segment distance.
      if (norm(sub(a[i], b[j])) - la[i] - lb[j] >= best) continue;
      best = std::min(best, segment_segment(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb]));
    }
  return best;
}

double distance_to_polyline(const Vec4& p, const std::vector<Vec4>& a) {
  double best = kInf;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::min(best, point_segment(p, a[i], a[(i + 1) % a.size()]));
  return best;
}

double det4(const std::array<Vec4, 4>& m) {
  Eigen::Matrix4d e;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) e(k, i) = m[i][k];
  return e.determinant();
}

// Orthonormal frame (e1, e2, e3, pole) with a fixed orientation sign.
std::array<Vec4, 3> projection_frame(const Vec4& pole_unit) {
  std::vector<Vec4> basis{pole_unit};
  for (int k = 0; k < 4 && basis.size() < 4; ++k) {
    Vec4 v{0, 0, 0, 0};
    v[k] = 1;
    for (const auto& b : basis) v = axpy(-dot(v, b), b, v);
    const double n = norm(v);
    if (n > 0.3) basis.push_back(scaled(v, 1 / n));
  }
  std::array<Vec4, 3> f{basis[1], basis[2], basis[3]};
  // Sign fixed once so that the Hopf pair links with +1.
  if (det4({f[0], f[1], f[2], pole_unit}) < 0) f[2] = scaled(f[2], -1);
  return f;
}

std::vector<kernels::Vec3> project(const std::vector<Vec4>& pts, const Vec4& pole, double r) {
  const Vec4 pu = scaled(pole, 1 / norm(pole));
  const auto f = projection_frame(pu);
  std::vector<kernels::Vec3> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double t = dot(pts[i], pu) / r;
    const double s = 1 / (1 - t);
    for (int k = 0; k < 3; ++k) out[i][k] = s * dot(pts[i], f[k]) / r;
  }
  return out;
}

bool pole_usable(const Vec4& pole, double r, const std::vector<const std::vector<Vec4>*>& curves) {
  for (const auto* c : curves)
    if (distance_to_polyline(pole, *c) <= 0.1 * r) return false;
  return true;
}

cplx horner(const std::vector<cplx>& a, cplx z) {
  cplx s = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) s = s * z + *it;
  return s;
}

std::vector<cplx> to_doubles(const TruncatedSeries& s) {
  std::vector<cplx> out(s.order());
  for (int k = 0; k < s.order(); ++k) {
    const QComplex& c = s.coeff(k);
    out[k] = cplx(c.re.get_d(), c.im.get_d());
  }
  return out;
}

int round_checked(double v, const std::string& what) {
  const double n = std::round(v);
  if (std::abs(v - n) > 0.1) throw PrecisionError(what + " sum " + std::to_string(v) + " is not close to an integer");
  return static_cast<int>(n);
}

}  // namespace

std::vector<Vec4> SphereComponent::oriented() const {
  if (orientation >= 0) return points;
  return std::vector<Vec4>(points.rbegin(), points.rend());
}

double SphereCurve::min_gap() const {
  double best = kInf;
  for (std::size_t i = 0; i < components.size(); ++i)
    for (std::size_t j = i + 1; j < components.size(); ++j)
      best = std::min(best, polyline_distance(components[i].points, components[j].points));
  return best;
}

PlanarMap polynomial_map(std::vector<std::vector<cplx>> coeffs, cplx center, std::string label) {
  if (coeffs.size() != 2) throw DimensionError("slicing needs curves in C^2");
  return PlanarMap{[coeffs](cplx z, cplx* out) {
                     out[0] = horner(coeffs[0], z);
                     out[1] = horner(coeffs[1], z);
                   },
                   center, std::move(label)};
}

PlanarMap planar_map(const CurveGerm& g) {
  g.check();
  if (g.dim() != 2) throw DimensionError("slicing needs germs in C^2");
  return polynomial_map({to_doubles(g.components[0]), to_doubles(g.components[1])}, 0, "germ");
}

PlanarMap planar_map(const GridFunction& u) {
  if (u.dim() != 2) throw DimensionError("slicing needs curves in C^2");
  auto in = std::make_shared<GridFunction::Interpolant>(u);
  return PlanarMap{[in](cplx z, cplx* out) {
                     if (std::abs(z) > 1) throw DomainError("slice left the parameter disc");
                     (*in)(z, out);
                   },
                   0, "grid"};
}

SphereCurve slice(const PlanarMap& u, double r, int samples) {
  if (!(r > 0)) throw DomainError("slice radius must be positive");
  if (samples < 8) throw DomainError("too few slice samples");
  auto mod = [&](cplx z) {
    cplx w[2];
    u.eval(z, w);
    return std::sqrt(std::norm(w[0]) + std::norm(w[1]));
  };
  if (mod(u.center) >= r) throw DomainError("curve centre lies outside the sphere of radius " + std::to_string(r));
  std::vector<cplx> dirs(samples);
  for (int k = 0; k < samples; ++k) dirs[k] = std::polar(1.0, 2 * M_PI * k / samples);

  // Smallest dyadic parameter radius at which every ray has left the ball.
  double rho_max = 1e-6;
  for (int it = 0;; ++it, rho_max *= 2) {
    if (it > 60) throw DomainError("curve never leaves the ball of radius " + std::to_string(r));
    bool out = true;
    for (int k = 0; k < samples && out; ++k) out = mod(u.center + rho_max * dirs[k]) > r;
    if (out) break;
  }

  constexpr int kRay = 48;
  SphereComponent comp;
  comp.points.resize(samples);
  for (int k = 0; k < samples; ++k) {
    double prev = mod(u.center), lo = 0, hi = -1;
    for (int j = 1; j <= kRay; ++j) {
      const double rho = rho_max * j / kRay;
      const double m = mod(u.center + rho * dirs[k]);
      if (!(m > prev)) throw TransversalityError("|u| is not increasing along the ray at angle " + std::to_string(2 * M_PI * k / samples));
      if (hi < 0 && m > r) {
        lo = rho_max * (j - 1) / kRay;
        hi = rho;
      }
      prev = m;
    }
    for (int b = 0; b < 200 && hi - lo > 1e-16 * rho_max; ++b) {
      const double mid = 0.5 * (lo + hi);
      (mod(u.center + mid * dirs[k]) > r ? hi : lo) = mid;
    }
    cplx w[2];
    u.eval(u.center + 0.5 * (lo + hi) * dirs[k], w);
    Vec4 p = to_vec4(w[0], w[1]);
    comp.points[k] = scaled(p, r / norm(p));
  }
  SphereCurve c;
  c.radius = r;
  c.components.push_back(std::move(comp));
  return c;
}

SphereCurve slice(const CurveGerm& g, double r, int samples) { return slice(planar_map(g), r, samples); }
SphereCurve slice(const GridFunction& u, double r, int samples) { return slice(planar_map(u), r, samples); }

SphereCurve combine(const std::vector<SphereCurve>& parts) {
  SphereCurve c;
  if (parts.empty()) return c;
  c.radius = parts.front().radius;
  for (const auto& p : parts) {
    if (std::abs(p.radius - c.radius) > 1e-12 * c.radius) throw DomainError("cannot combine slices of different spheres");
    c.components.insert(c.components.end(), p.components.begin(), p.components.end());
  }
  return c;
}

std::vector<Vec4> pole_candidates(double r) {
  static const std::array<Vec4, 8> base{{{0.5, 0.3, 0.7, 0.4},
                                         {-0.6, 0.2, -0.3, 0.7},
                                         {0.3, -0.7, 0.4, -0.5},
                                         {-0.4, -0.5, -0.6, -0.3},
                                         {0.7, 0.6, -0.2, -0.3},
                                         {-0.2, 0.4, 0.5, -0.7},
                                         {0.4, -0.3, -0.7, 0.5},
                                         {-0.7, -0.6, 0.3, 0.2}}};
  std::vector<Vec4> out;
  for (const auto& b : base) out.push_back(scaled(b, r / norm(b)));
  return out;
}

double linking_real(const SphereComponent& a, const SphereComponent& b, double r, const Vec4& pole) {
  return kernels::gauss_linking_sum(project(a.oriented(), pole, r), project(b.oriented(), pole, r));
}

std::vector<double> linking_by_pole(const SphereComponent& a, const SphereComponent& b, double r) {
  std::vector<double> out;
  for (const auto& p : pole_candidates(r))
    if (pole_usable(p, r, {&a.points, &b.points})) out.push_back(linking_real(a, b, r, p));
  return out;
}

int linking(const SphereComponent& a, const SphereComponent& b, double r) {
  for (const auto& p : pole_candidates(r))
    if (pole_usable(p, r, {&a.points, &b.points})) return round_checked(linking_real(a, b, r, p), "linking");
  throw PoleError("every pole candidate lies within 0.1 r of the curves");
}

int intersection_index_at(const CurveGerm& a, const CurveGerm& b, double r, int samples) {
  SphereCurve c = combine({slice(a, r, samples), slice(b, r, samples)});
  if (c.min_gap() <= 1e-3 * r) throw ExceptionalRadiusError("slices meet at radius " + std::to_string(r));
  return linking(c.components[0], c.components[1], r);
}

IntersectionResult intersection_index(const CurveGerm& a, const CurveGerm& b, double r0, int samples) {
  if (a.same_terms(b)) throw EqualError("germs coincide");
  double r = r0;
  for (int attempt = 0; attempt < 24; ++attempt, r /= 2) {
    try {
      SphereCurve c = combine({slice(a, r, samples), slice(b, r, samples)});
      const double gap = c.min_gap();
      if (gap <= 1e-3 * r) continue;
      return {linking(c.components[0], c.components[1], r), r, gap};
    } catch (const TransversalityError&) {
    }
  }
  throw ExceptionalRadiusError("no non-exceptional radius found below " + std::to_string(r0));
}

BennequinResult bennequin(const SphereCurve& gamma, const StructureField& j) {
  if (j.dim() != 4) throw DimensionError("Bennequin index needs a structure on R^4");
  const double r = gamma.radius;
  BennequinResult res;
  res.margin = kInf;
  // Unit push directions and transversality margins, per component.
  std::vector<std::vector<Vec4>> push(gamma.components.size());
  for (std::size_t c = 0; c < gamma.components.size(); ++c) {
    const auto pts = gamma.components[c].oriented();
    const std::size_t n = pts.size();
    push[c].resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Vec4& p = pts[k];
      const Vec4 pu = scaled(p, 1 / norm(p));
      RealVector x(4);
      for (int i = 0; i < 4; ++i) x(i) = p[i];
      const RealVector jtp = j(x).transpose().partialPivLu().solve(RealVector(x / r));
      // Unit normal of F inside T_p S^3.
      Vec4 nn{jtp(0), jtp(1), jtp(2), jtp(3)};
      nn = axpy(-dot(nn, pu), pu, nn);
      nn = scaled(nn, 1 / norm(nn));
      Vec4 t = sub(pts[(k + 1) % n], pts[(k + n - 1) % n]);
      t = scaled(t, 1 / norm(t));
      res.margin = std::min(res.margin, std::abs(dot(t, nn)));
      Vec4 v{-p[2], p[3], p[0], -p[1]};
      v = axpy(-dot(v, pu), pu, v);
      v = axpy(-dot(v, nn), nn, v);
      const double vn = norm(v);
      if (vn < 1e-8 * r) throw TransversalityError("v_st is normal to the contact plane");
      push[c][k] = scaled(v, 1 / vn);
    }
  }
  if (!(res.margin > 1e-6)) throw TransversalityError("slice is tangent to the contact planes");

  double eps = 1e-2;
  for (int attempt = 0; attempt <= 4; ++attempt, eps /= 2) {
    std::vector<SphereComponent> moved(gamma.components.size()), base(gamma.components.size());
    for (std::size_t c = 0; c < gamma.components.size(); ++c) {
      base[c].points = gamma.components[c].oriented();
      for (std::size_t k = 0; k < base[c].points.size(); ++k) {
        Vec4 q = axpy(eps * r, push[c][k], base[c].points[k]);
        moved[c].points.push_back(scaled(q, r / norm(q)));
      }
    }
    bool disjoint = true;
    for (std::size_t a = 0; a < base.size() && disjoint; ++a)
      for (std::size_t b = 0; b < moved.size() && disjoint; ++b)
        disjoint = polyline_distance(base[a].points, moved[b].points) > 0.25 * eps * r;
    if (!disjoint) continue;
    double total = 0;
    for (const auto& a : base)
      for (const auto& b : moved) {
        bool done = false;
        for (const auto& p : pole_candidates(r))
          if (pole_usable(p, r, {&a.points, &b.points})) {
            total += linking_real(a, b, r, p);
            done = true;
            break;
          }
        if (!done) throw PoleError("every pole candidate lies within 0.1 r of the curves");
      }
    res.value = total;
    res.index = round_checked(total, "Bennequin");
    res.eps = eps;
    return res;
  }
  throw DisjointnessError("pushoff meets the curve even at eps = " + std::to_string(eps * 2) + " r");
}

CuspIndexResult cusp_index_topological(const PlanarMap& u, const StructureField& j, double r, int samples) {
  CuspIndexResult out;
  out.radius = r;
  out.bennequin = bennequin(slice(u, r, samples), j).index;
  if (out.bennequin % 2 == 0 || out.bennequin < -1)
    throw PrecisionError("Bennequin index " + std::to_string(out.bennequin) + " gives no valid cusp index");
  out.kappa = (out.bennequin + 1) / 2;
  return out;
}

CuspIndexResult cusp_index_topological(const CurveGerm& g, const StructureField& j, double r0, int samples) {
  const int expected = cusp_index_formula(characteristic_exponents(g));
  const PlanarMap u = planar_map(g);
  double r = r0;
  for (int attempt = 0; attempt < 12; ++attempt, r /= 2) {
    try {
      CuspIndexResult res = cusp_index_topological(u, j, r, samples);
      if (res.kappa != expected)
        throw PrecisionError("topological cusp index " + std::to_string(res.kappa) + " differs from the formula value " +
                             std::to_string(expected));
      return res;
    } catch (const TransversalityError&) {
    } catch (const DisjointnessError&) {
    }
  }
  throw TransversalityError("no radius below " + std::to_string(r0) + " gives a transverse slice");
}

WallCrossingReport wall_crossing_check(const std::vector<PlanarMap>& branches, double r1, double r2, int delta_sum,
                                       int samples) {
  if (!(r1 < r2)) throw DomainError("wall crossing needs r1 < r2");
  const StructureField js = standard_structure(2);
  auto b_at = [&](double r) {
    std::vector<SphereCurve> parts;
    for (const auto& u : branches) parts.push_back(slice(u, r, samples));
    SphereCurve c = combine(parts);
    if (c.min_gap() <= 1e-3 * r) throw ExceptionalRadiusError("branches meet on the sphere of radius " + std::to_string(r));
    return bennequin(c, js).index;
  };
  WallCrossingReport rep;
  rep.b_inner = b_at(r1);
  rep.b_outer = b_at(r2);
  rep.delta_sum = delta_sum;
  rep.balanced = rep.b_outer == rep.b_inner + 2 * delta_sum;
  return rep;
}

GenusCheck genus_check(const GenusLedger& l) {
  const std::array<const std::optional<long>*, 6> f{&l.self_int_sq, &l.c1_pairing, &l.components_d,
                                                     &l.delta_sum,   &l.kappa_sum,  &l.genus_sum};
  static const std::array<const char*, 6> names{"self_int_sq", "c1_pairing", "components_d", "delta_sum", "kappa_sum", "genus_sum"};
  int unknown = -1, missing = 0;
  for (int i = 0; i < 6; ++i)
    if (!f[i]->has_value()) {
      unknown = i;
      ++missing;
    }
  if (missing > 1) throw UnderdeterminedError(std::to_string(missing) + " ledger fields are unknown");
  GenusCheck out;
  out.ledger = l;
  auto v = [&](int i) { return i == unknown ? 0L : **f[i]; };
  const long m2 = v(0), c1 = v(1), d = v(2), delta = v(3), kappa = v(4), g = v(5);
  auto need_even = [](long x) {
    if (x % 2) throw ParityError("[M]^2 - c1[M] must be even, got " + std::to_string(x));
  };
  switch (unknown) {
    case 0: out.ledger.self_int_sq = c1 + 2 * (g - d + delta + kappa); break;
    case 1: out.ledger.c1_pairing = m2 - 2 * (g - d + delta + kappa); break;
    case 2: need_even(m2 - c1); out.ledger.components_d = g - (m2 - c1) / 2 + delta + kappa; break;
    case 3: need_even(m2 - c1); out.ledger.delta_sum = (m2 - c1) / 2 + d - kappa - g; break;
    case 4: need_even(m2 - c1); out.ledger.kappa_sum = (m2 - c1) / 2 + d - delta - g; break;
    case 5: need_even(m2 - c1); out.ledger.genus_sum = (m2 - c1) / 2 + d - delta - kappa; break;
    default: break;
  }
  if (unknown >= 0) out.solved = names[unknown];
  const GenusLedger& s = out.ledger;
  const long diff = *s.self_int_sq - *s.c1_pairing;
  out.balanced = diff % 2 == 0 && *s.genus_sum == diff / 2 + *s.components_d - *s.delta_sum - *s.kappa_sum;
  return out;
}

std::pair<long, long> local_invariants(const std::vector<CurveGerm>& branches) {
  long delta = 0, kappa = 0;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    kappa += cusp_index_formula(characteristic_exponents(branches[i]));
    for (std::size_t k = i + 1; k < branches.size(); ++k) delta += intersection_index(branches[i], branches[k]).index;
  }
  return {delta, kappa};
}

json to_json(const SphereCurve& c) {
  json j;
  j["schema"] = 1;
  j["radius"] = c.radius;
  j["components"] = json::array();
  for (const auto& comp : c.components) {
    json pts = json::array();
    for (const auto& p : comp.points) pts.push_back({p[0], p[1], p[2], p[3]});
    j["components"].push_back({{"orientation", comp.orientation}, {"points", pts}});
  }
  const double gap = c.min_gap();
  j["min_gap"] = std::isfinite(gap) ? json(gap) : json(nullptr);
  return j;
}

SphereCurve sphere_curve_from_json(const json& j) {
  try {
    if (j.contains("schema") && j.at("schema") != 1) throw ParseError("unsupported sphere curve schema");
    SphereCurve c;
    c.radius = j.at("radius").get<double>();
    if (!(c.radius > 0)) throw ParseError("sphere radius must be positive");
    for (const auto& comp : j.at("components")) {
      SphereComponent sc;
      sc.orientation = comp.value("orientation", 1) >= 0 ? 1 : -1;
      for (const auto& p : comp.at("points")) {
        Vec4 v{p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>(), p.at(3).get<double>()};
        if (std::abs(norm(v) - c.radius) > 1e-8 * c.radius) throw ParseError("sphere curve point off the sphere");
        sc.points.push_back(v);
      }
      if (sc.points.size() < 3) throw ParseError("sphere curve component needs at least 3 points");
      c.components.push_back(std::move(sc));
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad sphere curve: ") + e.what());
  }
}

json to_json(const GenusLedger& l) {
  auto opt = [](const std::optional<long>& v) { return v ? json(*v) : json(nullptr); };
  return {{"schema", 1},
          {"self_int_sq", opt(l.self_int_sq)},
          {"c1_pairing", opt(l.c1_pairing)},
          {"components_d", opt(l.components_d)},
          {"delta_sum", opt(l.delta_sum)},
          {"kappa_sum", opt(l.kappa_sum)},
          {"genus_sum", opt(l.genus_sum)}};
}

GenusLedger ledger_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("ledger must be a JSON object");
    if (j.contains("schema") && j.at("schema") != 1) throw ParseError("unsupported ledger schema");
    auto get = [&](const char* k) -> std::optional<long> {
      if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
      return j.at(k).get<long>();
    };
    return {get("self_int_sq"), get("c1_pairing"), get("components_d"), get("delta_sum"), get("kappa_sum"), get("genus_sum")};
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad ledger: ") + e.what());
  }
}

}  // namespace pseudocurve
