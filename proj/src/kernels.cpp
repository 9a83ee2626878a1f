#include "pseudocurve/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>

namespace pseudocurve::kernels {

namespace {

// One output mode: slot n of out from slot n+1 of in.
void sweep_mode(const DiscGrid& g, int slot, const std::vector<cplx>& in, std::vector<cplx>& out) {
  const int na = g.n_angular(), nr = g.n_radial(), q = g.panel_size(), P = g.panels();
  const int n = mode_of(slot, na);
  cplx* dst = &out[static_cast<std::size_t>(slot) * nr];
  for (int i = 0; i < nr; ++i) dst[i] = 0;
  if (slot == na / 2 || n + 1 >= na / 2) return;
  const cplx* src = &in[static_cast<std::size_t>(slot_of(n + 1, na)) * nr];
  const auto& r = g.radii();
  const auto& br = g.breaks();
  if (n < 0) {
    const int p = -n;
    const auto& w = g.weights(p);
    cplx carry = 0;  // integral up to the previous panel's right end
    for (int k = 0; k < P; ++k) {
      for (int j = 0; j < q; ++j) {
        const int i = k * q + j;
        cplx acc = 0;
        const double* wi = &w.inner[static_cast<std::size_t>(i) * q];
        for (int l = 0; l < q; ++l) acc += wi[l] * src[k * q + l];
        if (k > 0) acc += std::pow(br[k] / r[i], p) * carry;
        dst[i] = 2.0 * acc;
      }
      carry = 0.5 * dst[k * q + q - 1];
    }
  } else {
    const int p = n;
    const auto& w = g.weights(p);
    cplx tail = 0;  // integral from the current panel's right end to 1
    for (int k = P - 1; k >= 0; --k) {
      if (k < P - 1) {
        cplx full = 0;
        const double* wf = &w.outer_full[static_cast<std::size_t>(k + 1) * q];
        for (int l = 0; l < q; ++l) full += wf[l] * src[(k + 1) * q + l];
        tail = full + std::pow(br[k + 1] / br[k + 2], p) * tail;
      }
      for (int j = 0; j < q; ++j) {
        const int i = k * q + j;
        cplx acc = 0;
        const double* wo = &w.outer[static_cast<std::size_t>(i) * q];
        for (int l = 0; l < q; ++l) acc += wo[l] * src[k * q + l];
        acc += std::pow(r[i] / br[k + 1], p) * tail;
        dst[i] = -2.0 * acc;
      }
    }
  }
}

void prepare(const DiscGrid& g) {
  const int pmax = g.n_angular() / 2;
#pragma omp parallel for schedule(dynamic)
  for (int p = 0; p <= pmax; ++p) g.weights(p);
}

}  // namespace

void cauchy_green_modes(const DiscGrid& g, const std::vector<cplx>& in, std::vector<cplx>& out) {
  prepare(g);
  out.assign(in.size(), cplx(0));
  const int na = g.n_angular();
#pragma omp parallel for schedule(dynamic)
  for (int slot = 0; slot < na; ++slot) sweep_mode(g, slot, in, out);
}

void cauchy_green_modes_serial(const DiscGrid& g, const std::vector<cplx>& in, std::vector<cplx>& out) {
  out.assign(in.size(), cplx(0));
  for (int slot = 0; slot < g.n_angular(); ++slot) sweep_mode(g, slot, in, out);
}

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 unit(const Vec3& a) {
  const double n = std::sqrt(dot(a, a));
  if (n == 0) return {0, 0, 0};
  return {a[0] / n, a[1] / n, a[2] / n};
}
double clamp1(double x) { return x > 1 ? 1 : (x < -1 ? -1 : x); }

double row_sum(const std::vector<Vec3>& a, const std::vector<Vec3>& b, std::size_t i) {
  const std::size_t na = a.size(), nb = b.size();
  double s = 0;
  for (std::size_t j = 0; j < nb; ++j)
    s += segment_pair_solid_angle(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb]);
  return s;
}

}  // namespace

double segment_pair_solid_angle(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4) {
  const Vec3 r13 = sub(p3, p1), r14 = sub(p4, p1), r23 = sub(p3, p2), r24 = sub(p4, p2);
  const Vec3 r12 = sub(p2, p1), r34 = sub(p4, p3);
  const Vec3 n1 = unit(cross(r13, r14)), n2 = unit(cross(r14, r24));
  const Vec3 n3 = unit(cross(r24, r23)), n4 = unit(cross(r23, r13));
  const double omega = std::asin(clamp1(dot(n1, n2))) + std::asin(clamp1(dot(n2, n3))) +
                       std::asin(clamp1(dot(n3, n4))) + std::asin(clamp1(dot(n4, n1)));
  const double s = dot(cross(r34, r12), r13);
  return s > 0 ? omega : (s < 0 ? -omega : 0.0);
}

// Rows are summed independently, then combined in index order, so the result does not
// depend on the thread count.
double gauss_linking_sum(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  std::vector<double> rows(a.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < a.size(); ++i) rows[i] = row_sum(a, b, i);
  double s = 0;
  for (double x : rows) s += x;
  return s / (4 * std::numbers::pi);
}

double gauss_linking_sum_serial(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  std::vector<double> rows(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) rows[i] = row_sum(a, b, i);
  double s = 0;
  for (double x : rows) s += x;
  return s / (4 * std::numbers::pi);
}

}  // namespace pseudocurve::kernels
