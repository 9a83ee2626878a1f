#pragma once

// Links of curves in small spheres S^3_r of C^2 = R^4 (coordinates x1, y1, x2, y2).
//
// Orientation: a slice is oriented by increasing parameter angle. Linking numbers are computed
// after stereographic projection with a fixed orientation of S^3, chosen so that the Hopf pair
// {w2 = 0}, {w1 = 0} links with +1; intersection indices of complex curves then come out
// positive and the slice of a smooth branch has Bennequin index -1.

#include <array>
#include <complex>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pseudocurve/acs.hpp"
#include "pseudocurve/grid.hpp"
#include "pseudocurve/singularity.hpp"

namespace pseudocurve {

using Vec4 = std::array<double, 4>;

// A map from a parameter disc into C^2, sliced along rays from `center`, where |u| is smallest.
struct PlanarMap {
  std::function<void(cplx z, cplx* out)> eval;
  cplx center = 0;
  std::string label;
};

PlanarMap planar_map(const CurveGerm& g);
PlanarMap planar_map(const GridFunction& u);
// Polynomial sum_k a_k z^k per component, optionally recentred.
PlanarMap polynomial_map(std::vector<std::vector<cplx>> coeffs, cplx center = 0, std::string label = "");

struct SphereComponent {
  std::vector<Vec4> points;  // closed polyline, last point joins the first
  int orientation = 1;
  std::vector<Vec4> oriented() const;
};

struct SphereCurve {
  double radius = 0;
  std::vector<SphereComponent> components;
  // Smallest distance between segments of different components (infinity for one component).
  double min_gap() const;
};

// Each theta sample is solved by bisection for |u(center + rho e^{i theta})| = r.
// Throws TransversalityError when |u| fails to increase strictly along some ray.
SphereCurve slice(const PlanarMap& u, double r, int samples = 1024);
SphereCurve slice(const CurveGerm& g, double r, int samples = 1024);
SphereCurve slice(const GridFunction& u, double r, int samples = 1024);
SphereCurve combine(const std::vector<SphereCurve>& parts);

// Eight fixed pole candidates on S^3_r, tried in order.
std::vector<Vec4> pole_candidates(double r);

// Rounded linking number; PoleError if every pole is within 0.1 r of a curve, PrecisionError if
// the Gauss sum is more than 0.1 from an integer.
int linking(const SphereComponent& a, const SphereComponent& b, double r);
double linking_real(const SphereComponent& a, const SphereComponent& b, double r, const Vec4& pole);
// Unrounded sums for every usable pole, in candidate order.
std::vector<double> linking_by_pole(const SphereComponent& a, const SphereComponent& b, double r);

struct IntersectionResult {
  int index = 0;
  double radius = 0;
  double gap = 0;
};
// Slices both germs at r0, r0/2, ... until their links are 1e-3 r apart and transverse.
IntersectionResult intersection_index(const CurveGerm& a, const CurveGerm& b, double r0 = 0.05, int samples = 1024);
int intersection_index_at(const CurveGerm& a, const CurveGerm& b, double r, int samples = 1024);

struct BennequinResult {
  int index = 0;
  double value = 0;       // unrounded linking with the pushoff
  double eps = 0;         // pushoff distance used, relative to r
  double margin = 0;      // min |<tangent, contact normal>|
};
// Pushes every component along v_st(w1, w2) = (-conj w2, conj w1) projected to
// F = TS^3 cap J(TS^3) and links the result with the curve.
BennequinResult bennequin(const SphereCurve& gamma, const StructureField& j);

struct CuspIndexResult {
  int kappa = 0;
  int bennequin = 0;
  double radius = 0;
};
// (b + 1) / 2 of a slice at r0 or the first smaller dyadic radius that works. For symbolic germs
// this is checked against the formula in the exponents (PrecisionError on mismatch).
CuspIndexResult cusp_index_topological(const CurveGerm& g, const StructureField& j, double r0 = 0.05, int samples = 1024);
CuspIndexResult cusp_index_topological(const PlanarMap& u, const StructureField& j, double r, int samples = 1024);

struct WallCrossingReport {
  int b_inner = 0, b_outer = 0;
  int delta_sum = 0;
  bool balanced = false;  // b_outer == b_inner + 2 delta_sum
};
// The branches are sliced on both spheres; delta_sum counts intersections inside the shell.
WallCrossingReport wall_crossing_check(const std::vector<PlanarMap>& branches, double r1, double r2, int delta_sum,
                                       int samples = 1024);

struct GenusLedger {
  std::optional<long> self_int_sq, c1_pairing, components_d, delta_sum, kappa_sum, genus_sum;
};

struct GenusCheck {
  bool balanced = false;
  std::string solved;  // name of the field filled in, empty when all were given
  GenusLedger ledger;
};

// sum g_j = ([M]^2 - c1[M]) / 2 + d - delta - kappa.
GenusCheck genus_check(const GenusLedger& l);
// delta and kappa of a singular point from its branches.
std::pair<long, long> local_invariants(const std::vector<CurveGerm>& branches);

nlohmann::json to_json(const SphereCurve& c);
SphereCurve sphere_curve_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GenusLedger& l);
GenusLedger ledger_from_json(const nlohmann::json& j);

}  // namespace pseudocurve
