#pragma once

// Hamiltonian side: symplectic forms, Hamiltonian vector fields, Poisson
// brackets and Liouville-Arnold certification.
//
// Sign conventions: omega = -d theta, i(X_H) omega = dH, {F,G} = dF(X_G),
// which gives [X_F, X_G] = X_{{G,F}}.

#include <optional>
#include <span>
#include <vector>

#include "geomech/geometry.hpp"
#include "geomech/linalg.hpp"
#include "geomech/report.hpp"

namespace gm {

class SymplecticForm {
 public:
  /// Validate omega at seeded samples: nondegenerate everywhere sampled and,
  /// when `require_closed`, d omega = 0 within 1e-10.
  static SymplecticForm from_form(PForm omega, const VerifyOptions& opts = {}, bool require_closed = true);

  const PForm& form() const { return form_; }
  const Chart& chart() const { return form_.chart(); }
  std::size_t dim() const { return form_.chart().dim(); }
  /// Omega_ij with omega = sum_{i<j} Omega_ij dx^i ^ dx^j.
  const ExprMatrix& matrix() const { return matrix_; }
  /// Symbolic inverse of Omega, present for dim <= 6.
  const std::optional<ExprMatrix>& inverse() const { return inverse_; }
  double closure_residual() const { return closure_residual_; }

  /// Solve Omega^T v = rhs at a point.
  Point solve_transposed(std::span<const double> x, std::span<const double> rhs) const;

 private:
  PForm form_;
  ExprMatrix matrix_;
  std::optional<ExprMatrix> inverse_;
  double closure_residual_ = 0.0;
};

/// omega = sum dq^i ^ dp_i on a cotangent chart.
SymplecticForm canonical_symplectic(const Chart& cotangent);

/// Liouville 1-form theta = sum p_i dq^i on a cotangent chart.
PForm liouville_form(const Chart& cotangent);

VectorField hamiltonian_vector_field(const Expr& h, const SymplecticForm& omega);

/// {F,G} = dF(X_G)
Expr poisson_bracket(const Expr& f, const Expr& g, const SymplecticForm& omega);

/// Residual of {{G,H},F} + {{H,F},G} + {{F,G},H} at samples.
Report jacobi_identity_check(const Expr& f, const Expr& g, const Expr& h, const SymplecticForm& omega,
                             const VerifyOptions& opts = {});

/// Residual of [X_F, X_G] - X_{{G,F}} at samples.
Report hamiltonian_homomorphism_check(const Expr& f, const Expr& g, const SymplecticForm& omega,
                                      const VerifyOptions& opts = {});

struct LiouvilleCertificate {
  std::vector<double> constancy;                 // max |{F_k, H}|
  std::vector<std::vector<double>> involution;   // max |{F_j, F_k}|
  double independence_fraction = 0.0;            // samples where rank = n
  std::size_t rank = 0;                          // rank of dF_1..dF_n reached at >= 95% of samples
  std::vector<double> extra_constancy;           // max |{G_k, H}| for extra integrals
  std::size_t joint_rank = 0;                    // rank with extras, at >= 95% of samples
  bool constants_pass = false;
  bool involution_pass = false;
  bool independence_pass = false;
  bool certified = false;
  bool superintegrable = false;
  bool maximally_superintegrable = false;
  double tolerance = 0.0;
  std::size_t samples = 0;

  Json to_json() const;
};

/// Complete integrability: n = dim/2 functions, F_1 = H by convention,
/// pairwise in involution, constant along X_H and independent at >= 95% of
/// samples. Extra integrals are tested for constancy and joint rank.
LiouvilleCertificate liouville_certify(const Expr& h, std::span<const Expr> integrals, std::span<const Expr> extra,
                                       const SymplecticForm& omega, const VerifyOptions& opts = {});

/// Fraction-of-samples rank rule shared by the independence tests: the largest
/// r such that the Jacobian of `fs` has rank >= r at >= `quorum` of samples.
std::size_t quorum_rank(std::span<const Expr> fs, std::span<const Point> samples, double quorum = 0.95);

}  // namespace gm
