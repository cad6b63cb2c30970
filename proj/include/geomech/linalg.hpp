#pragma once

// Small dense linear algebra on Expr matrices and their numeric values.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geomech/expr.hpp"

namespace gm {

using ExprMatrix = std::vector<std::vector<Expr>>;

/// Laplace expansion with memoised minors (O(n 2^n) products).
Expr symbolic_determinant(const ExprMatrix& m);

/// Adjugate inverse adj(M)/det(M). Intended for n <= 6.
ExprMatrix symbolic_inverse(const ExprMatrix& m);

ExprMatrix transpose(const ExprMatrix& m);
ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b);

Eigen::MatrixXd evaluate(const ExprMatrix& m, std::span<const double> x);

/// Numerical rank: singular values above rel_tol * max(sigma_max, scale).
/// `scale` keeps round-off-only matrices from reporting full rank.
std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9, double scale = 0.0);

/// Orthonormal basis (as rows) of the row space of `m`, same rank rule.
Eigen::MatrixXd row_space_basis(const Eigen::MatrixXd& m, double rel_tol = 1e-9, double scale = 0.0);

}  // namespace gm
