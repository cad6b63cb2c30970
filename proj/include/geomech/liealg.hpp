#pragma once

// Lie algebras spanned by vector-field frames: structure constants,
// derived / lower central series and the constructive n = 2 first integral.

#include <cstddef>
#include <span>
#include <vector>

#include "geomech/geometry.hpp"
#include "geomech/report.hpp"

namespace gm {

struct StructureConstants {
  std::size_t n = 0;
  std::vector<double> c;       // c[(i*n + j)*n + k] = c_ij^k, across-sample mean
  std::vector<double> spread;  // across-sample standard deviation, same layout
  double max_spread = 0.0;
  double antisymmetry_residual = 0.0;
  double jacobi_residual = 0.0;
  double max_condition_number = 0.0;
  std::size_t samples = 0;

  double operator()(std::size_t i, std::size_t j, std::size_t k) const { return c[(i * n + j) * n + k]; }
  Json to_json() const;
};

struct LieAlgebraReport {
  bool solvable = false;
  bool nilpotent = false;
  std::vector<std::size_t> derived_series;
  std::vector<std::size_t> lower_central_series;

  Json to_json() const;
};

/// Fit [X_i, X_j] = sum_k c_ij^k X_k pointwise and require constancy across
/// samples (std <= `constancy_tol`).
StructureConstants structure_constants(std::span<const VectorField> fields, std::span<const Point> samples,
                                       double constancy_tol = 1e-6);
StructureConstants structure_constants(std::span<const VectorField> fields, const VerifyOptions& opts = {},
                                       double constancy_tol = 1e-6);

/// Derived and lower central series by numerical rank (relative 1e-9).
LieAlgebraReport solvability(const StructureConstants& c, double rank_tol = 1e-9);

struct PlanarFirstIntegral {
  /// F(x) = line integral of alpha from `base` along the axis-parallel path
  /// that first moves in x^1 and then in x^2.
  Expr value;
  PForm alpha;
  double lambda = 0.0;
  Report report;
};

struct QuadratureOptions {
  double lambda_tol = 1e-6;    // constancy of lambda
  double closure_tol = 1e-8;   // |d alpha| at samples
  double quadrature_tol = 1e-10;
  double contract_tol = 1e-6;  // X1(F) ~ 0 and X2(F) ~ 1
  double flow_step = 1e-2;     // symmetric flow difference for X(F)
};

/// Constructive n = 2 case: [X1, X2] = lambda X1 with lambda constant gives a
/// closed 1-form alpha with i(X1) alpha = 0, i(X2) alpha = 1, and F = int alpha
/// is a first integral of X1. `region` must be simply connected and contain
/// `base`; the chart box is used for sampling.
PlanarFirstIntegral lie_first_integral_2d(const VectorField& x1, const VectorField& x2, std::span<const double> base,
                                          const Box& region, const VerifyOptions& opts = {},
                                          const QuadratureOptions& qopts = {});

/// Difference between the two axis-parallel paths (x-then-y vs y-then-x).
double path_independence_residual(const PForm& alpha, std::span<const double> base, std::span<const double> x,
                                  double quadrature_tol = 1e-10);

/// Adaptive Gauss-Kronrod integral of f over [a, b].
double integrate_1d(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

}  // namespace gm
