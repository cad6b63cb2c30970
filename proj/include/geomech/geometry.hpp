#pragma once

// Tensor fields on a chart and the exterior / Lie calculus acting on them.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "geomech/chart.hpp"
#include "geomech/expr.hpp"

namespace gm {

using Multi = std::vector<std::size_t>;

/// Sort `idx` in place and return the sign of the sorting permutation, or 0
/// when an index repeats. Every sign in the exterior algebra goes through here.
int sort_with_sign(Multi& idx);

/// All strictly increasing multi-indices of length p over {0..n-1}, in
/// lexicographic order.
std::vector<Multi> increasing_multi_indices(std::size_t n, std::size_t p);

std::size_t binomial(std::size_t n, std::size_t k);

/// Evaluation rule for a procedural vector field: writes X(x) into `out`.
using VectorRule = std::function<void(std::span<const double> x, std::span<double> out)>;

class VectorField {
 public:
  VectorField() = default;
  VectorField(Chart chart, std::vector<Expr> components);

  static VectorField zero(const Chart& chart);
  /// Coordinate field d/dx^i.
  static VectorField coordinate(const Chart& chart, std::size_t i);
  static VectorField parse(const Chart& chart, std::span<const std::string> components);

  /// Field defined by a pointwise rule. Partial derivatives of its components
  /// fall back to central differences with `fd_step`.
  static VectorField procedural(Chart chart, std::string name, VectorRule rule, double fd_step = kDefaultFdStep);

  const Chart& chart() const { return chart_; }
  std::size_t dim() const { return comps_.size(); }
  const std::vector<Expr>& components() const { return comps_; }
  const Expr& operator[](std::size_t i) const { return comps_[i]; }
  bool is_symbolic() const;

  void eval(std::span<const double> x, std::span<double> out) const;
  Point eval(std::span<const double> x) const;

  /// Directional derivative X(f) = sum_k X^k d_k f.
  Expr apply(const Expr& f) const;

  VectorField operator+(const VectorField& other) const;
  VectorField operator-(const VectorField& other) const;
  VectorField scaled(const Expr& f) const;
  VectorField simplified() const;

  /// Max over components of |X^i(x)|.
  double max_abs_at(std::span<const double> x) const;

 private:
  Chart chart_;
  std::vector<Expr> comps_;
  VectorRule rule_;
};

/// Differential p-form, components stored by increasing multi-index.
class PForm {
 public:
  PForm() = default;
  PForm(Chart chart, std::size_t degree);  // zero form
  PForm(Chart chart, std::size_t degree, std::vector<Expr> components);

  static PForm scalar(const Chart& chart, const Expr& f);
  /// dx^i
  static PForm coordinate_differential(const Chart& chart, std::size_t i);

  const Chart& chart() const { return chart_; }
  std::size_t degree() const { return degree_; }
  const std::vector<Multi>& multi_indices() const { return indices_; }
  const std::vector<Expr>& components() const { return comps_; }

  /// Component for a strictly increasing multi-index.
  const Expr& at(const Multi& increasing) const;
  /// Component for an arbitrary ordering, with the antisymmetry sign applied.
  Expr signed_at(Multi idx) const;
  /// Add `value` to the component for an arbitrary ordering.
  void accumulate(Multi idx, const Expr& value);
  void set(const Multi& increasing, Expr value);

  /// Scalar value for degree 0.
  const Expr& as_scalar() const;

  PForm operator+(const PForm& other) const;
  PForm operator-(const PForm& other) const;
  PForm operator-() const;
  PForm scaled(const Expr& f) const;
  PForm simplified() const;

  /// Numerically frozen copy: every component replaced by its value at x.
  PForm frozen_at(std::span<const double> x) const;
  double max_abs_at(std::span<const double> x) const;

  /// 2-forms only: full antisymmetric component matrix Omega_ij.
  std::vector<std::vector<Expr>> matrix() const;

 private:
  std::size_t rank_of(const Multi& increasing) const;

  Chart chart_;
  std::size_t degree_ = 0;
  std::vector<Multi> indices_;
  std::vector<Expr> comps_;
};

/// (1,1)-tensor with components R^i_j (output index i, input index j).
class Tensor11 {
 public:
  Tensor11() = default;
  Tensor11(Chart chart, std::vector<std::vector<Expr>> components);

  static Tensor11 identity(const Chart& chart);

  const Chart& chart() const { return chart_; }
  std::size_t dim() const { return comps_.size(); }
  const Expr& operator()(std::size_t i, std::size_t j) const { return comps_[i][j]; }
  const std::vector<std::vector<Expr>>& components() const { return comps_; }

  /// R(Y)^i = sum_j R^i_j Y^j
  VectorField apply(const VectorField& y) const;
  Tensor11 operator-(const Tensor11& other) const;
  double max_abs_at(std::span<const double> x) const;

 private:
  Chart chart_;
  std::vector<std::vector<Expr>> comps_;
};

/// rho dx^1 ^ ... ^ dx^n with rho > 0 on the working box.
class VolumeForm {
 public:
  VolumeForm() = default;
  explicit VolumeForm(Chart chart, Expr density = Expr(1.0));

  const Chart& chart() const { return chart_; }
  const Expr& density() const { return density_; }
  /// Same orientation, density divided by f.
  VolumeForm rescaled_by_inverse(const Expr& f) const;

 private:
  Chart chart_;
  Expr density_;
};

/// A smooth map F from a source chart into a target chart, as target.dim()
/// component expressions over the source coordinates.
struct ChartMap {
  Chart source;
  Chart target;
  std::vector<Expr> components;
};

VectorField lie_bracket(const VectorField& x, const VectorField& y);

PForm exterior_derivative(const PForm& alpha);
PForm interior_product(const VectorField& x, const PForm& alpha);
PForm wedge(const PForm& alpha, const PForm& beta);
/// k-fold wedge power (k >= 1).
PForm wedge_power(const PForm& alpha, std::size_t k);

/// Cartan formula L_X a = i(X) d a + d(i(X) a). Top-degree forms drop the
/// first term since their exterior derivative vanishes.
PForm lie_derivative(const VectorField& x, const PForm& alpha);
Tensor11 lie_derivative(const VectorField& x, const Tensor11& r);
/// Pullback along F: components composed with F and contracted with the
/// Jacobian minors of F.
PForm pullback(const ChartMap& f, const PForm& alpha);

/// div(X) = (1/rho) sum_i d_i(rho X^i), returned as a scalar expression.
Expr divergence(const VectorField& x, const VolumeForm& omega);
Expr divergence(const VectorField& x);

/// Evaluate the Jacobian d_j X^i(x) numerically from the component partials.
std::vector<std::vector<double>> jacobian_at(const VectorField& x, std::span<const double> at);

}  // namespace gm
