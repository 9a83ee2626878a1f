#pragma once

// Almost complex structures on (regions of) R^{2n} and their Q-operators.
//
// Coordinates are interleaved (x_1, y_1, ..., x_n, y_n), so C^n embeds as w_k = x_k + i y_k
// and J_st is block-diagonal with blocks [[0, -1], [1, 0]]. An antilinear operator is stored
// as a complex matrix M acting by w -> M conj(w).
//
// Sign convention: with dbar u = Q conj(du) and Qbar = (J + J_st)^{-1}(J_st - J), solving for
// J gives J = J_st (Id - Qbar)(Id + Qbar)^{-1}. This is the inverse map; the variant with the
// two factors swapped does not invert it.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pseudocurve/grid.hpp"

namespace pseudocurve {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

RealMatrix standard_j(int n);
RealVector to_real(const ComplexVector& w);
ComplexVector to_complex(const RealVector& x);
// Real 2n x 2n matrix of w -> M conj(w), and back (the back map reads off the antilinear part).
RealMatrix antilinear_to_real(const ComplexMatrix& m);
ComplexMatrix antilinear_from_real(const RealMatrix& a);

// Pointwise versions of the two correspondences.
RealMatrix q_bar_of(const RealMatrix& j);
RealMatrix j_of_q_bar(const RealMatrix& q_bar);

class StructureField {
 public:
  using Eval = std::function<RealMatrix(const RealVector&)>;

  StructureField(int dim, Eval eval, std::string label, std::optional<double> lipschitz_hint = {});

  int dim() const { return dim_; }
  int n() const { return dim_ / 2; }
  const std::string& label() const { return label_; }
  std::optional<double> lipschitz_hint() const { return hint_; }

  // Pure and reentrant. Debug builds assert J^2 = -Id.
  RealMatrix operator()(const RealVector& x) const;
  RealMatrix at(const ComplexVector& w) const { return (*this)(to_real(w)); }

 private:
  int dim_;
  Eval eval_;
  std::string label_;
  std::optional<double> hint_;
};

class QField {
 public:
  using Eval = std::function<ComplexMatrix(const ComplexVector&)>;

  QField(int n, Eval eval, std::string label);

  int n() const { return n_; }
  const std::string& label() const { return label_; }
  ComplexMatrix operator()(const ComplexVector& w) const;

 private:
  int n_;
  Eval eval_;
  std::string label_;
};

// Both throw SingularError at points where the relevant matrix is not invertible.
QField j_to_q(const StructureField& j);
StructureField q_to_j(const QField& q);

struct Ball {
  RealVector center;
  double radius = 1;
};

struct LipschitzScale {
  double h = 0;  // pair distances in (h/2, h]
  double quotient = 0;
  long pairs = 0;
};

struct LipschitzReport {
  double estimate = 0;  // sup over all pairs: a lower bound for Lip(J) on the ball
  std::vector<LipschitzScale> scales;
  // Set when the finest scale still exceeds the quotient four halvings coarser by 10%.
  bool super_lipschitz = false;
};

// Pairs stratified by dyadic distance 2^-coarsest .. 2^-finest; half the base points sit at a
// log-uniform distance from the centre, half are uniform in the ball. Operator 2-norm.
LipschitzReport lipschitz_profile(const StructureField& j, const Ball& region, long budget,
                                  std::uint64_t seed = 0, int coarsest = 1, int finest = 16);
double lipschitz_estimate(const StructureField& j, const Ball& region, long budget, std::uint64_t seed = 0);

// Node-wise |d_x u + J(u) d_y u|.
GridFunction cr_residual(const StructureField& j, const GridFunction& u);

// Built-in structures.
StructureField standard_structure(int n);
QField example_2_3_q();
StructureField example_2_3(int mu = 1);
StructureField example_9_1(int k);
QField example_9_2_q();
StructureField example_9_2();
// J_t(x) = J(t^mu x).
StructureField dilated(const StructureField& base, double t, double mu);

// name in {standard, example_2_3, example_9_1, example_9_2, dilated}; params as in the JSON schema.
StructureField builtin(const std::string& name, const nlohmann::json& params);

// Structure spec documents, schema 1:
//   {"schema": 1, "builtin": "example_9_1", "params": {"k": 2}}
//   {"schema": 1, "builtin": "dilated", "params": {"base": {...}, "t": 0.5, "mu": 1}}
//   {"schema": 1, "q_matrix_polynomials": {"n": 2, "entries": [
//       {"row": 1, "col": 0, "terms": [{"coef": [2, 0], "w": [0, 0], "wbar": [1, 0]}]}]}}
// Polynomial entries are sums of coef * prod w_k^a_k * prod conj(w_k)^b_k (0-based row/col).
StructureField structure_from_json(const nlohmann::json& doc);
QField polynomial_q_from_json(const nlohmann::json& spec);
StructureField load_structure(const std::string& path);

}  // namespace pseudocurve
