#pragma once

// Hamilton-Jacobi theory as reduction along a section alpha of T*Q.

#include <optional>
#include <vector>

#include "geomech/flow.hpp"
#include "geomech/geometry.hpp"
#include "geomech/report.hpp"

namespace gm {

struct HJProblem {
  Chart cotangent;                 // (q^1..q^n, p_1..p_n)
  Expr hamiltonian;
  std::vector<Expr> alpha;         // alpha_i(q)
  std::optional<Expr> generating;  // S(q) with alpha = dS

  std::size_t base_dim() const { return cotangent.base_dim(); }
  Chart base() const { return cotangent.base(); }

  static HJProblem from_alpha(Chart cotangent, Expr hamiltonian, std::vector<Expr> alpha);
  static HJProblem from_generating(Chart cotangent, Expr hamiltonian, Expr s);
};

/// alpha^* H = H(q, alpha(q)).
Expr pulled_back_hamiltonian(const HJProblem& prob);

/// Z^i(q) = dH/dp_i (q, alpha(q)).
VectorField hj_reduced_field(const HJProblem& prob);

struct HJResidual {
  PForm residual;  // i(Z) d alpha + d(alpha^* H)
  Report report;
};

/// Relatedness condition. Passes when every component is <= `tol` at samples
/// of the base box.
HJResidual hj_residual(const HJProblem& prob, const VerifyOptions& opts = {}, double tol = 1e-9);

struct HJStandard {
  double energy = 0.0;
  double stddev = 0.0;
  VectorField reduced;  // X^S
  Report report;
};

/// H(q, dS(q)) = E: passes when the sample standard deviation is
/// <= 1e-9 max(1, |mean|).
HJStandard hj_standard_check(const HJProblem& prob, const VerifyOptions& opts = {});

/// Integrate Z from q0 and X_H from alpha(q0) with RK4 and compare alpha
/// along the base curve with the phase-space curve. Throws NumericError when
/// either integration leaves its box.
Report lift_and_compare(const HJProblem& prob, std::span<const double> q0, double T, double step = 1e-3,
                        double tol = 1e-6, const VerifyOptions& opts = {});

}  // namespace gm
