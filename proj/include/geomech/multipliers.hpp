#pragma once

// Divergences with respect to a volume form, Jacobi multipliers and Hojman
// constants of motion.
//
// Distribution symmetries are written [Y, X] = h X throughout.

#include <optional>

#include "geomech/flow.hpp"
#include "geomech/geometry.hpp"
#include "geomech/lagrangian.hpp"
#include "geomech/report.hpp"

namespace gm {

/// X(div Y) - Y(div X) - div([X, Y]) at samples.
Report divergence_identity_check(const VectorField& x, const VectorField& y, const VolumeForm& omega,
                                 const VerifyOptions& opts = {});

/// div(X) + X(log R) at samples. Throws PreconditionError("positivity") when
/// R <= 0 at a sample.
Report jacobi_multiplier_check(const Expr& r, const VectorField& x, const VolumeForm& omega,
                               const VerifyOptions& opts = {});

/// R is a multiplier for (X, Omega) iff f R is one for (X, Omega / f). The
/// report passes when both checks agree; details carry both verdicts.
Report scaling_covariance_check(const Expr& r, const VectorField& x, const VolumeForm& omega, const Expr& f,
                                const VerifyOptions& opts = {});

/// det W of a regular Lagrangian: symbolic for n <= 4, pointwise LU beyond.
Expr hessian_multiplier(const LagrangianSystem& sys);

struct SymmetryFit {
  Expr h;
  bool symbolic = false;
  Report report;
};

/// Least-squares h with [Y, X] ~ h X at each sample. Accepted when
/// |[Y,X] - hX| <= 1e-7 max(1, |[Y,X]|) everywhere; throws
/// PreconditionError("symmetry") otherwise.
SymmetryFit distribution_symmetry_fit(const VectorField& x, const VectorField& y, const VerifyOptions& opts = {},
                                      double tol = 1e-7);

struct HojmanInput {
  VectorField x;
  VectorField y;
  std::optional<Expr> h;           // fitted when absent
  std::optional<Expr> multiplier;  // R; div X = 0 is required when absent
  std::optional<VolumeForm> volume;  // coordinate volume when absent
};

struct HojmanResult {
  Expr value;  // I = div Y + Y(log R) + h
  bool trivial = false;
  double variance = 0.0;
  Report report;
  std::optional<DriftReport> drift;
};

/// Hojman constant with precondition checks ("divergence", "symmetry",
/// "multiplier"), the L_X I residual at samples (tolerance `lie_tol`) and an
/// optional drift run along X.
HojmanResult hojman_constant(const HojmanInput& in, const VerifyOptions& opts = {}, double lie_tol = 1e-7,
                             const std::optional<DriftRequest>& drift_request = {});

}  // namespace gm
