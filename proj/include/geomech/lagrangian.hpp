#pragma once

// Tangent-bundle side: Cartan forms of a Lagrangian, the Euler-Lagrange SODE,
// complete lifts, Noether constants and gauge equivalence.
//
// Chart layout is (q^1..q^n, v^1..v^n); base functions use indices 0..n-1 and
// are therefore valid on the tangent chart unchanged.

#include <optional>
#include <vector>

#include "geomech/flow.hpp"
#include "geomech/geometry.hpp"
#include "geomech/linalg.hpp"
#include "geomech/report.hpp"

namespace gm {

struct LagrangianSystem {
  Chart chart;
  Expr lagrangian;
  PForm theta;      // sum dL/dv^i dq^i
  PForm omega;      // -d theta
  Expr energy;      // sum v^i dL/dv^i - L
  ExprMatrix hessian;  // W_ij = d2L/dv^i dv^j
  Expr hessian_det;
  bool regular = false;  // det W != 0 at every sample
  double min_abs_det = 0.0;
};

/// Build theta_L, omega_L, E_L and W. Regularity is judged at seeded samples.
LagrangianSystem build_structures(const Chart& tangent, const Expr& lagrangian, const VerifyOptions& opts = {});

enum class SodeForm {
  Procedural,  // pointwise LU solve of W F = rhs
  Symbolic,    // adjugate inverse of W, n <= 3
};

/// Euler-Lagrange field Gamma = v^i d/dq^i + F^i d/dv^i with
/// W_ij F^j = dL/dq^i - v^j d2L/dq^j dv^i.
VectorField sode(const LagrangianSystem& sys, SodeForm form = SodeForm::Procedural);

/// Residuals of i(Gamma) omega_L - dE_L and L_Gamma theta_L - dL at samples.
Report sode_check(const LagrangianSystem& sys, const VectorField& gamma, const VerifyOptions& opts = {});

/// X^c = X^i d/dq^i + (dX^i/dq^j) v^j d/dv^i for X on the base of `tangent`.
VectorField complete_lift(const VectorField& x, const Chart& tangent);

/// Fiber-linear lift of dh: sum (dh/dq^i) v^i.
Expr fiber_linear_lift(const Expr& h, const Chart& tangent);

struct NoetherResult {
  Expr value;
  Report report;
  std::optional<DriftReport> drift;
};

struct DriftRequest {
  Point x0;
  double T = 0.0;
  IntegrateOptions integrate;
  double tol = 1e-8;
};

/// Noether's theorem: if X^c L = (dh)^ then f = sum (dL/dv^i) X^i - h is a
/// constant of the motion. Throws PreconditionError("symmetry") when the
/// symmetry condition fails at the samples.
NoetherResult noether_constant(const LagrangianSystem& sys, const VectorField& x, const Expr& h,
                               const VerifyOptions& opts = {}, const std::optional<DriftRequest>& drift_request = {},
                               SodeForm form = SodeForm::Procedural);

/// omega_L = omega_L' and E_L = E_L' at samples (tolerance 1e-9). The
/// details also report whether L' - L is fiber-affine.
Report gauge_equivalent(const Chart& tangent, const Expr& l, const Expr& l_prime, const VerifyOptions& opts = {},
                        double tol = 1e-9);

}  // namespace gm
