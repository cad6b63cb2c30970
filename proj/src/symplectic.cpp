#include "geomech/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include "geomech/error.hpp"

namespace gm {

SymplecticForm SymplecticForm::from_form(PForm omega, const VerifyOptions& opts, bool require_closed) {
  if (omega.degree() != 2) throw DimensionError("symplectic form must have degree 2");
  const std::size_t n = omega.chart().dim();
  if (n % 2 != 0) throw DimensionError("symplectic form requires an even-dimensional chart");

  SymplecticForm s;
  s.form_ = omega.simplified();
  s.matrix_ = s.form_.matrix();

  const auto samples = sample_points(s.chart(), opts, defined_at(s.form_.components()));
  for (const auto& x : samples) {
    if (numerical_rank(evaluate(s.matrix_, x)) != n) {
      throw PreconditionError("nondegeneracy", "2-form is degenerate at a sample point");
    }
  }
  if (n > 2) {
    const PForm d = exterior_derivative(s.form_);
    s.closure_residual_ = residual_over(samples, [&](std::span<const double> x) { return d.max_abs_at(x); }).max_abs;
    if (require_closed && s.closure_residual_ > 1e-10) {
      throw PreconditionError("closedness", "2-form is not closed", s.closure_residual_);
    }
  }
  if (n <= 6) s.inverse_ = symbolic_inverse(s.matrix_);
  return s;
}

Point SymplecticForm::solve_transposed(std::span<const double> x, std::span<const double> rhs) const {
  const Eigen::MatrixXd m = evaluate(matrix_, x);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rhs.size()));
  for (std::size_t i = 0; i < rhs.size(); ++i) b(static_cast<Eigen::Index>(i)) = rhs[i];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m.transpose());
  if (!lu.isInvertible()) throw NumericError("symplectic matrix is singular at the evaluation point");
  const Eigen::VectorXd v = lu.solve(b);
  return Point(v.data(), v.data() + v.size());
}

PForm liouville_form(const Chart& cotangent) {
  if (cotangent.flavor() != Flavor::Cotangent) throw DimensionError("Liouville form requires a cotangent chart");
  const std::size_t n = cotangent.base_dim();
  PForm theta(cotangent, 1);
  for (std::size_t i = 0; i < n; ++i) theta.set({i}, Expr::var(n + i));
  return theta;
}

SymplecticForm canonical_symplectic(const Chart& cotangent) {
  if (cotangent.flavor() != Flavor::Cotangent) throw DimensionError("canonical structure requires a cotangent chart");
  return SymplecticForm::from_form(-exterior_derivative(liouville_form(cotangent)));
}

VectorField hamiltonian_vector_field(const Expr& h, const SymplecticForm& omega) {
  const Chart& chart = omega.chart();
  require_on_chart(h, chart, "Hamiltonian");
  const std::size_t n = chart.dim();
  std::vector<Expr> grad(n);
  for (std::size_t j = 0; j < n; ++j) grad[j] = simplify(diff(h, j));

  if (omega.inverse()) {
    // Omega^T X = grad H  =>  X = -Omega^{-1} grad H
    const ExprMatrix& inv = *omega.inverse();
    std::vector<Expr> comps(n);
    for (std::size_t i = 0; i < n; ++i) {
      Expr acc;
      for (std::size_t j = 0; j < n; ++j) {
        if (inv[i][j].is_const(0.0) || grad[j].is_const(0.0)) continue;
        acc = acc - inv[i][j] * grad[j];
      }
      comps[i] = simplify(acc);
    }
    return VectorField(chart, std::move(comps));
  }
  auto rule = [omega, grad](std::span<const double> x, std::span<double> out) {
    Point g(grad.size());
    for (std::size_t j = 0; j < grad.size(); ++j) g[j] = grad[j].eval(x);
    const Point v = omega.solve_transposed(x, g);
    std::copy(v.begin(), v.end(), out.begin());
  };
  return VectorField::procedural(chart, "X_H", std::move(rule));
}

Expr poisson_bracket(const Expr& f, const Expr& g, const SymplecticForm& omega) {
  return simplify(hamiltonian_vector_field(g, omega).apply(f));
}

Report jacobi_identity_check(const Expr& f, const Expr& g, const Expr& h, const SymplecticForm& omega,
                             const VerifyOptions& opts) {
  const Expr cyclic = simplify(poisson_bracket(poisson_bracket(g, h, omega), f, omega) +
                               poisson_bracket(poisson_bracket(h, f, omega), g, omega) +
                               poisson_bracket(poisson_bracket(f, g, omega), h, omega));
  const auto samples = sample_points(omega.chart(), opts, defined_at({f, g, h, cyclic}));
  Report r;
  r.check = "poisson_jacobi_identity";
  r.tolerance = opts.tol;
  r.samples = samples.size();
  r.residual = residual_over(samples, [&](std::span<const double> x) { return cyclic.eval(x); });
  r.pass = r.residual.max_abs <= opts.tol;
  r.details["closure_residual"] = omega.closure_residual();
  return r;
}

Report hamiltonian_homomorphism_check(const Expr& f, const Expr& g, const SymplecticForm& omega,
                                      const VerifyOptions& opts) {
  const VectorField xf = hamiltonian_vector_field(f, omega);
  const VectorField xg = hamiltonian_vector_field(g, omega);
  const VectorField lhs = lie_bracket(xf, xg);
  const VectorField rhs = hamiltonian_vector_field(poisson_bracket(g, f, omega), omega);
  const VectorField diff_field = (lhs - rhs).simplified();
  const auto samples = sample_points(omega.chart(), opts, defined_at(diff_field.components()));
  Report r;
  r.check = "hamiltonian_homomorphism";
  r.tolerance = opts.tol;
  r.samples = samples.size();
  r.residual = residual_over(samples, [&](std::span<const double> x) { return diff_field.max_abs_at(x); });
  r.pass = r.residual.max_abs <= opts.tol;
  return r;
}

std::size_t quorum_rank(std::span<const Expr> fs, std::span<const Point> samples, double quorum) {
  if (fs.empty() || samples.empty()) return 0;
  const std::size_t n = samples.front().size();
  ExprMatrix jac(fs.size(), std::vector<Expr>(n));
  for (std::size_t k = 0; k < fs.size(); ++k) {
    for (std::size_t j = 0; j < n; ++j) jac[k][j] = diff(fs[k], j);
  }
  std::vector<std::size_t> ranks;
  ranks.reserve(samples.size());
  for (const auto& x : samples) ranks.push_back(numerical_rank(evaluate(jac, x)));
  std::sort(ranks.begin(), ranks.end(), std::greater<>());
  const auto needed = static_cast<std::size_t>(std::ceil(quorum * static_cast<double>(ranks.size())));
  return ranks[std::max<std::size_t>(needed, 1) - 1];
}

LiouvilleCertificate liouville_certify(const Expr& h, std::span<const Expr> integrals, std::span<const Expr> extra,
                                       const SymplecticForm& omega, const VerifyOptions& opts) {
  const std::size_t n = omega.dim() / 2;
  if (integrals.size() != n) {
    throw DimensionError("Liouville certification needs exactly " + std::to_string(n) + " integrals, got " +
                         std::to_string(integrals.size()));
  }
  std::vector<Expr> all(integrals.begin(), integrals.end());
  all.insert(all.end(), extra.begin(), extra.end());
  all.push_back(h);
  const auto samples = sample_points(omega.chart(), opts, defined_at(all));
  all.pop_back();

  LiouvilleCertificate c;
  c.tolerance = opts.tol;
  c.samples = samples.size();
  auto max_over = [&](const Expr& e) {
    return residual_over(samples, [&](std::span<const double> x) { return e.eval(x); }).max_abs;
  };

  for (const auto& f : integrals) c.constancy.push_back(max_over(poisson_bracket(f, h, omega)));
  c.involution.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const double v = max_over(poisson_bracket(integrals[j], integrals[k], omega));
      c.involution[j][k] = v;
      c.involution[k][j] = v;
    }
  }
  for (const auto& g : extra) c.extra_constancy.push_back(max_over(poisson_bracket(g, h, omega)));

  // Independence: fraction of samples where dF_1 ^ ... ^ dF_n != 0.
  ExprMatrix jac(n, std::vector<Expr>(omega.dim()));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < omega.dim(); ++j) jac[k][j] = diff(integrals[k], j);
  }
  std::size_t full = 0;
  for (const auto& x : samples) {
    if (numerical_rank(evaluate(jac, x)) == n) ++full;
  }
  c.independence_fraction = samples.empty() ? 0.0 : static_cast<double>(full) / static_cast<double>(samples.size());
  c.rank = quorum_rank(integrals, samples);

  c.constants_pass = std::all_of(c.constancy.begin(), c.constancy.end(), [&](double v) { return v <= opts.tol; });
  c.involution_pass = true;
  for (const auto& row : c.involution) {
    for (double v : row) c.involution_pass = c.involution_pass && v <= opts.tol;
  }
  c.independence_pass = c.independence_fraction >= 0.95;
  c.certified = c.constants_pass && c.involution_pass && c.independence_pass;

  const bool extras_constant =
      std::all_of(c.extra_constancy.begin(), c.extra_constancy.end(), [&](double v) { return v <= opts.tol; });
  c.joint_rank = extra.empty() ? c.rank : quorum_rank(all, samples);
  c.superintegrable = c.certified && !extra.empty() && extras_constant && c.joint_rank > n;
  c.maximally_superintegrable = c.superintegrable && c.joint_rank == 2 * n - 1;
  return c;
}

Json LiouvilleCertificate::to_json() const {
  Json j;
  j["certified"] = certified;
  j["constancy_residuals"] = constancy;
  j["involution_residuals"] = involution;
  j["independence_fraction"] = independence_fraction;
  j["rank"] = rank;
  j["constants_pass"] = constants_pass;
  j["involution_pass"] = involution_pass;
  j["independence_pass"] = independence_pass;
  j["extra_constancy_residuals"] = extra_constancy;
  j["joint_rank"] = joint_rank;
  j["superintegrable"] = superintegrable;
  j["maximally_superintegrable"] = maximally_superintegrable;
  j["tolerance"] = tolerance;
  j["samples"] = samples;
  return j;
}

}  // namespace gm
