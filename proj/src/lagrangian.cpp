#include "geomech/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "geomech/error.hpp"

namespace gm {

namespace {

void require_tangent(const Chart& chart, std::string_view what) {
  if (chart.flavor() != Flavor::Tangent) {
    throw DimensionError(std::string(what) + " requires a tangent-bundle chart");
  }
}

double max_component(const PForm& a, std::span<const double> x) { return a.max_abs_at(x); }

}  // namespace

LagrangianSystem build_structures(const Chart& tangent, const Expr& lagrangian, const VerifyOptions& opts) {
  require_tangent(tangent, "Lagrangian structures");
  require_on_chart(lagrangian, tangent, "Lagrangian");
  const std::size_t n = tangent.base_dim();

  LagrangianSystem sys;
  sys.chart = tangent;
  sys.lagrangian = lagrangian;

  std::vector<Expr> momenta(n);
  for (std::size_t i = 0; i < n; ++i) momenta[i] = simplify(diff(lagrangian, n + i));

  sys.theta = PForm(tangent, 1);
  for (std::size_t i = 0; i < n; ++i) sys.theta.set({i}, momenta[i]);
  sys.omega = (-exterior_derivative(sys.theta)).simplified();

  Expr e = -lagrangian;
  for (std::size_t i = 0; i < n; ++i) e = e + Expr::var(n + i) * momenta[i];
  sys.energy = simplify(e);

  sys.hessian.assign(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sys.hessian[i][j] = j < i ? sys.hessian[j][i] : simplify(diff(momenta[i], n + j));
    }
  }
  sys.hessian_det = symbolic_determinant(sys.hessian);

  const auto samples = sample_points(tangent, opts, defined_at({lagrangian, sys.hessian_det}));
  sys.min_abs_det = std::numeric_limits<double>::infinity();
  for (const auto& x : samples) sys.min_abs_det = std::min(sys.min_abs_det, std::abs(sys.hessian_det.eval(x)));
  sys.regular = sys.min_abs_det > 1e-12;
  return sys;
}

VectorField sode(const LagrangianSystem& sys, SodeForm form) {
  const Chart& chart = sys.chart;
  const std::size_t n = chart.base_dim();

  // rhs_i = dL/dq^i - sum_j v^j d2L/dq^j dv^i
  std::vector<Expr> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Expr p = sys.theta.at({i});
    Expr acc = diff(sys.lagrangian, i);
    for (std::size_t j = 0; j < n; ++j) acc = acc - Expr::var(n + j) * diff(p, j);
    rhs[i] = simplify(acc);
  }

  if (form == SodeForm::Symbolic) {
    if (n > 3) throw DimensionError("symbolic SODE limited to n <= 3");
    const ExprMatrix inv = symbolic_inverse(sys.hessian);
    std::vector<Expr> comps(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      comps[i] = Expr::var(n + i);
      Expr acc;
      for (std::size_t j = 0; j < n; ++j) acc = acc + inv[i][j] * rhs[j];
      comps[n + i] = simplify(acc);
    }
    return VectorField(chart, std::move(comps));
  }

  const ExprMatrix w = sys.hessian;
  auto rule = [w, rhs, n](std::span<const double> x, std::span<double> out) {
    const Eigen::MatrixXd wm = evaluate(w, x);
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) b(static_cast<Eigen::Index>(i)) = rhs[i].eval(x);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(wm);
    if (!lu.isInvertible()) throw NumericError("Hessian W is singular at the evaluation point");
    const Eigen::VectorXd f = lu.solve(b);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = x[n + i];
      out[n + i] = f(static_cast<Eigen::Index>(i));
    }
  };
  return VectorField::procedural(chart, "Gamma_L", std::move(rule));
}

Report sode_check(const LagrangianSystem& sys, const VectorField& gamma, const VerifyOptions& opts) {
  require_same_chart(sys.chart, gamma.chart(), "sode_check");
  const PForm defining = interior_product(gamma, sys.omega) - exterior_derivative(PForm::scalar(sys.chart, sys.energy));
  const PForm lagrange = lie_derivative(gamma, sys.theta) - exterior_derivative(PForm::scalar(sys.chart, sys.lagrangian));
  const auto samples = sample_points(sys.chart, opts, defined_at({sys.lagrangian, sys.hessian_det}));

  Report r;
  r.check = "euler_lagrange_sode";
  r.tolerance = opts.tol;
  r.samples = samples.size();
  r.residual = residual_over(samples, [&](std::span<const double> x) { return max_component(defining, x); });
  const ResidualStats lie = residual_over(samples, [&](std::span<const double> x) { return max_component(lagrange, x); });

  // S(Gamma) = Delta: the q-components of Gamma must equal the velocities.
  const std::size_t n = sys.chart.base_dim();
  const ResidualStats second_order = residual_over(samples, [&](std::span<const double> x) {
    const Point g = gamma.eval(x);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(g[i] - x[n + i]));
    return m;
  });
  r.details["i_gamma_omega_minus_dE"] = r.residual.to_json();
  r.details["lie_gamma_theta_minus_dL"] = lie.to_json();
  r.details["second_order_residual"] = second_order.max_abs;
  r.pass = r.residual.max_abs <= opts.tol && lie.max_abs <= opts.tol && second_order.max_abs <= opts.tol;
  return r;
}

VectorField complete_lift(const VectorField& x, const Chart& tangent) {
  require_tangent(tangent, "complete lift");
  const std::size_t n = tangent.base_dim();
  if (x.dim() != n) {
    throw DimensionError("complete lift expects a field with " + std::to_string(n) + " components, got " +
                         std::to_string(x.dim()));
  }
  std::vector<Expr> comps(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    require_on_chart(x[i], tangent.base(), "base vector field");
    comps[i] = x[i];
    Expr acc;
    for (std::size_t j = 0; j < n; ++j) acc = acc + diff(x[i], j) * Expr::var(n + j);
    comps[n + i] = simplify(acc);
  }
  return VectorField(tangent, std::move(comps));
}

Expr fiber_linear_lift(const Expr& h, const Chart& tangent) {
  const std::size_t n = tangent.base_dim();
  Expr acc;
  for (std::size_t i = 0; i < n; ++i) acc = acc + diff(h, i) * Expr::var(n + i);
  return simplify(acc);
}

NoetherResult noether_constant(const LagrangianSystem& sys, const VectorField& x, const Expr& h,
                               const VerifyOptions& opts, const std::optional<DriftRequest>& drift_request,
                               SodeForm form) {
  const Chart& chart = sys.chart;
  const std::size_t n = chart.base_dim();
  require_on_chart(h, chart.base(), "Noether gauge function");
  const VectorField xc = complete_lift(x, chart);

  const Expr condition = simplify(xc.apply(sys.lagrangian) - fiber_linear_lift(h, chart));
  const auto samples = sample_points(chart, opts, defined_at({sys.lagrangian, condition, sys.hessian_det}));
  const ResidualStats sym = residual_over(samples, [&](std::span<const double> p) { return condition.eval(p); });
  if (sym.max_abs > opts.tol) {
    throw PreconditionError("symmetry", "X^c L differs from the fiber-linear lift of dh", sym.max_abs);
  }
  if (!sys.regular) throw PreconditionError("regularity", "Lagrangian is degenerate (det W = 0 at a sample)");

  NoetherResult out;
  Expr f = -h;
  for (std::size_t i = 0; i < n; ++i) f = f + sys.theta.at({i}) * x[i];
  out.value = simplify(f);

  const VectorField gamma = sode(sys, form);
  const Expr gf = gamma.apply(out.value);

  Report& r = out.report;
  r.check = "noether_constant";
  r.tolerance = opts.tol;
  r.samples = samples.size();
  r.residual = residual_over(samples, [&](std::span<const double> p) { return gf.eval(p); });
  r.details["constant"] = out.value.str(chart.names());
  r.details["symmetry_residual"] = sym.to_json();
  r.pass = r.residual.max_abs <= opts.tol;

  if (drift_request) {
    IntegrateOptions io = drift_request->integrate;
    const Trajectory traj = integrate(gamma, drift_request->x0, drift_request->T, io);
    out.drift = drift("noether_constant", out.value, traj, drift_request->tol);
    r.details["trajectory"] = traj.metadata();
    r.details["drift"] = out.drift->to_json();
    r.pass = r.pass && out.drift->pass;
  }
  return out;
}

Report gauge_equivalent(const Chart& tangent, const Expr& l, const Expr& l_prime, const VerifyOptions& opts,
                        double tol) {
  const LagrangianSystem a = build_structures(tangent, l, opts);
  const LagrangianSystem b = build_structures(tangent, l_prime, opts);
  const PForm domega = (a.omega - b.omega).simplified();
  const Expr denergy = simplify(a.energy - b.energy);
  const Expr delta = simplify(l_prime - l);

  const std::size_t n = tangent.base_dim();
  std::vector<Expr> second;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) second.push_back(simplify(diff(diff(delta, n + i), n + j)));
  }

  const auto samples = sample_points(tangent, opts, defined_at({l, l_prime}));
  Report r;
  r.check = "gauge_equivalence";
  r.tolerance = tol;
  r.samples = samples.size();
  const ResidualStats omega_res =
      residual_over(samples, [&](std::span<const double> x) { return domega.max_abs_at(x); });
  const ResidualStats energy_res = residual_over(samples, [&](std::span<const double> x) { return denergy.eval(x); });
  const ResidualStats affine_res = residual_over(samples, [&](std::span<const double> x) {
    double m = 0.0;
    for (const auto& e : second) m = std::max(m, std::abs(e.eval(x)));
    return m;
  });
  r.residual = omega_res.max_abs >= energy_res.max_abs ? omega_res : energy_res;
  r.details["omega_residual"] = omega_res.to_json();
  r.details["energy_residual"] = energy_res.to_json();
  r.details["energy_difference"] = denergy.str(tangent.names());
  r.details["fiber_affine"] = affine_res.max_abs <= tol;
  r.details["fiber_affine_residual"] = affine_res.max_abs;
  r.pass = omega_res.max_abs <= tol && energy_res.max_abs <= tol;
  return r;
}

}  // namespace gm
