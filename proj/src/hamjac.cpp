#include "geomech/hamjac.hpp"

#include <algorithm>
#include <cmath>

#include "geomech/error.hpp"
#include "geomech/symplectic.hpp"

namespace gm {

namespace {

void validate(const HJProblem& p) {
  if (p.cotangent.flavor() != Flavor::Cotangent) throw DimensionError("Hamilton-Jacobi requires a cotangent chart");
  require_on_chart(p.hamiltonian, p.cotangent, "Hamiltonian");
  if (p.alpha.size() != p.base_dim()) {
    throw DimensionError("section needs " + std::to_string(p.base_dim()) + " components, got " +
                         std::to_string(p.alpha.size()));
  }
  const Chart base = p.base();
  for (const auto& a : p.alpha) require_on_chart(a, base, "section component");
}

// Values for substitute(): q^i -> q^i, p_i -> alpha_i(q).
std::vector<Expr> section_substitution(const HJProblem& p) {
  const std::size_t n = p.base_dim();
  std::vector<Expr> values(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = Expr::var(i);
    values[n + i] = p.alpha[i];
  }
  return values;
}

std::vector<Point> base_samples(const HJProblem& p, const VerifyOptions& opts, std::vector<Expr> extra = {}) {
  extra.insert(extra.end(), p.alpha.begin(), p.alpha.end());
  extra.push_back(pulled_back_hamiltonian(p));
  return sample_points(p.base(), opts, defined_at(std::move(extra)));
}

}  // namespace

HJProblem HJProblem::from_alpha(Chart cotangent, Expr hamiltonian, std::vector<Expr> alpha) {
  HJProblem p{std::move(cotangent), std::move(hamiltonian), std::move(alpha), std::nullopt};
  validate(p);
  return p;
}

HJProblem HJProblem::from_generating(Chart cotangent, Expr hamiltonian, Expr s) {
  const std::size_t n = cotangent.base_dim();
  std::vector<Expr> alpha(n);
  for (std::size_t i = 0; i < n; ++i) alpha[i] = simplify(diff(s, i));
  HJProblem p{std::move(cotangent), std::move(hamiltonian), std::move(alpha), std::move(s)};
  validate(p);
  require_on_chart(*p.generating, p.base(), "generating function");
  return p;
}

Expr pulled_back_hamiltonian(const HJProblem& prob) {
  const auto values = section_substitution(prob);
  return simplify(substitute(prob.hamiltonian, values));
}

VectorField hj_reduced_field(const HJProblem& prob) {
  validate(prob);
  const std::size_t n = prob.base_dim();
  const auto values = section_substitution(prob);
  std::vector<Expr> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = simplify(substitute(diff(prob.hamiltonian, n + i), values));
  return VectorField(prob.base(), std::move(z));
}

HJResidual hj_residual(const HJProblem& prob, const VerifyOptions& opts, double tol) {
  const VectorField z = hj_reduced_field(prob);
  const Chart base = prob.base();
  const PForm alpha(base, 1, prob.alpha);
  PForm res = exterior_derivative(PForm::scalar(base, pulled_back_hamiltonian(prob)));
  // On a one-dimensional base d alpha is a 2-form on a line and vanishes.
  if (base.dim() > 1) res = res + interior_product(z, exterior_derivative(alpha));

  HJResidual out;
  out.residual = res.simplified();
  const auto samples = base_samples(prob, opts);
  Report& r = out.report;
  r.check = "hamilton_jacobi_relatedness";
  r.tolerance = tol;
  r.samples = samples.size();
  r.residual = residual_over(samples, [&](std::span<const double> q) { return out.residual.max_abs_at(q); });
  r.pass = r.residual.max_abs <= tol;
  if (base.dim() > 1) {
    const PForm da = exterior_derivative(alpha);
    r.details["closure_residual"] =
        residual_over(samples, [&](std::span<const double> q) { return da.max_abs_at(q); }).max_abs;
  } else {
    r.details["closure_residual"] = 0.0;
  }
  return out;
}

HJStandard hj_standard_check(const HJProblem& prob, const VerifyOptions& opts) {
  if (!prob.generating) throw PreconditionError("generating", "standard check needs a generating function S");
  const Expr e = pulled_back_hamiltonian(prob);
  const auto samples = base_samples(prob, opts, {*prob.generating});

  HJStandard out;
  double sum = 0.0;
  for (const auto& q : samples) sum += e.eval(q);
  const double count = static_cast<double>(samples.size());
  out.energy = sum / count;
  // Two-pass variance keeps round-off from masquerading as spread.
  double var = 0.0;
  for (const auto& q : samples) {
    const double d = e.eval(q) - out.energy;
    var += d * d;
  }
  var /= count;
  out.stddev = std::sqrt(var);
  out.reduced = hj_reduced_field(prob);

  Report& r = out.report;
  r.check = "hamilton_jacobi_standard";
  r.tolerance = 1e-9 * std::max(1.0, std::abs(out.energy));
  r.samples = samples.size();
  r.residual = residual_over(samples, [&](std::span<const double> q) { return e.eval(q) - out.energy; });
  r.details["energy"] = out.energy;
  r.details["stddev"] = out.stddev;
  r.details["variance"] = var;
  std::vector<std::string> xs;
  for (const auto& c : out.reduced.components()) xs.push_back(c.str(prob.base().names()));
  r.details["reduced_field"] = xs;
  r.pass = out.stddev <= r.tolerance;
  return out;
}

Report lift_and_compare(const HJProblem& prob, std::span<const double> q0, double T, double step, double tol,
                        const VerifyOptions& opts) {
  const std::size_t n = prob.base_dim();
  if (q0.size() != n) throw DimensionError("initial base point has the wrong dimension");
  const HJResidual rel = hj_residual(prob, opts);
  if (!rel.report.pass) {
    throw PreconditionError("relatedness", "alpha does not solve the Hamilton-Jacobi relatedness condition",
                            rel.report.residual.max_abs);
  }
  const VectorField z = hj_reduced_field(prob);
  const SymplecticForm omega = canonical_symplectic(prob.cotangent);
  const VectorField xh = hamiltonian_vector_field(prob.hamiltonian, omega);

  Point x0(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    x0[i] = q0[i];
    x0[n + i] = prob.alpha[i].eval(q0);
  }

  IntegrateOptions io;
  io.step = step;
  const Trajectory base = integrate_in_box(z, q0, T, io);
  const Trajectory phase = integrate_in_box(xh, x0, T, io);
  if (base.states.size() != phase.states.size()) throw NumericError("trajectories have different time grids");

  Report r;
  r.check = "hamilton_jacobi_lift";
  r.tolerance = tol;
  r.samples = base.states.size();
  for (std::size_t s = 0; s < base.states.size(); ++s) {
    const Point& q = base.states[s];
    const Point& x = phase.states[s];
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d = std::max(d, std::abs(q[i] - x[i]));
      d = std::max(d, std::abs(prob.alpha[i].eval(q) - x[n + i]));
    }
    r.residual.add(d, x);
  }

  // Tangency: the momentum components of X_H on the image of alpha equal
  // the derivative of alpha along Z.
  std::vector<Expr> tangency(n);
  const auto values = section_substitution(prob);
  for (std::size_t i = 0; i < n; ++i) tangency[i] = simplify(substitute(xh[n + i], values) - z.apply(prob.alpha[i]));
  const auto samples = base_samples(prob, opts);
  r.details["tangency_residual"] = residual_over(samples, [&](std::span<const double> q) {
                                     double m = 0.0;
                                     for (const auto& t : tangency) m = std::max(m, std::abs(t.eval(q)));
                                     return m;
                                   }).max_abs;
  r.details["base_trajectory"] = base.metadata();
  r.details["phase_trajectory"] = phase.metadata();
  r.details["T"] = T;
  r.pass = r.residual.max_abs <= tol;
  return r;
}

}  // namespace gm
