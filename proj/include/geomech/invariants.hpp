#pragma once

// Lax matrices of an invariant (1,1)-tensor, trace invariants, Faddeev-Le
// Verrier coefficients, pencils of 2-forms and recursion operators.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geomech/flow.hpp"
#include "geomech/geometry.hpp"
#include "geomech/linalg.hpp"
#include "geomech/report.hpp"
#include "geomech/symplectic.hpp"

namespace gm {

/// A[i][j] = A_i^j with R(X_i) = sum_j A_i^j X_j, and B[i][j] = B_i^j with
/// L_X X_i = sum_j B_i^j X_j. In the coordinate frame A is the transpose of
/// the component matrix of R and B_i^j = -dX^j/dx^i.
struct LaxPair {
  Chart chart;
  ExprMatrix a;
  ExprMatrix b;
  bool coordinate_frame = true;

  bool symbolic() const;
  Eigen::MatrixXd a_at(std::span<const double> x) const { return evaluate(a, x); }
  Eigen::MatrixXd b_at(std::span<const double> x) const { return evaluate(b, x); }
};

/// Coordinate frame when `frame` is empty; otherwise A and B are solved
/// pointwise in the given frame (entries become procedural scalars) after the
/// frame is checked to be independent at the samples.
LaxPair lax_matrices(const Tensor11& r, const VectorField& x, std::span<const VectorField> frame = {},
                     const VerifyOptions& opts = {});

/// max over samples of |A' - [B, A]|_F, A' = X(A). Symbolic entries use the
/// exact directional derivative; procedural ones a symmetric difference along
/// the flow of X.
Report lax_residual(const LaxPair& pair, const VectorField& x, const VerifyOptions& opts = {});

/// t_k = Tr(A^k) for k = 1..k_max.
std::vector<Expr> trace_invariants(const LaxPair& pair, std::size_t k_max);

/// Faddeev-Le Verrier: {1, c_1, ..., c_n} with
/// det(lambda I - A) = lambda^n + c_1 lambda^{n-1} + ... + c_n.
std::vector<double> leverrier(const Eigen::MatrixXd& a);

/// Polynomial coefficients in increasing powers of lambda.
using Polynomial = std::vector<double>;

struct PencilCharacteristic {
  Polynomial wedge_route;        // f from (w' - lambda w)^n = f w^n
  Polynomial leverrier_route;    // square root of det(R - lambda I)
  Polynomial recursion_charpoly; // det(R - lambda I), degree 2n
  double route_residual = 0.0;   // max |coefficient difference|
  double square_residual = 0.0;  // |f_wedge^2 - det(R - lambda I)|
  double tolerance = 1e-9;
  bool agree = false;

  Json to_json() const;
};

/// Characteristic function of the pencil w' - lambda w at x, computed by the
/// top-degree wedge expansion and by Le Verrier on R = Omega^-1 Omega'. The
/// characteristic polynomial of R is f^2 (each eigenvalue has even
/// multiplicity), so the second route takes its polynomial square root.
PencilCharacteristic pencil_characteristic(const SymplecticForm& omega, const PForm& omega_prime,
                                           std::span<const double> x, double tol = 1e-9);

/// Symbolic f(lambda) coefficients (increasing powers) via the wedge route.
std::vector<Expr> pencil_coefficients(const SymplecticForm& omega, const PForm& omega_prime);

/// R = Omega^-1 Omega' as a (1,1)-tensor.
Tensor11 recursion_operator(const SymplecticForm& omega, const PForm& omega_prime);

/// Residual of L_X R at samples.
Report tensor_invariance_check(const Tensor11& r, const VectorField& x, const VerifyOptions& opts = {});

/// w' = L_Y w for a symmetry Y of the dynamics.
PForm pencil_from_symmetry(const VectorField& y, const SymplecticForm& omega);

/// Closedness check for w' (residual of d w' at samples, tolerance 1e-10).
Report closed_form_check(const PForm& form, const VerifyOptions& opts = {}, double tol = 1e-10);

}  // namespace gm
