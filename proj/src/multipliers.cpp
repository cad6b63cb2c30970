#include "geomech/multipliers.hpp"

#include <algorithm>
#include <cmath>

#include "geomech/error.hpp"

namespace gm {

namespace {

std::vector<Expr> components_of(std::initializer_list<const VectorField*> fields) {
  std::vector<Expr> out;
  for (const auto* f : fields) out.insert(out.end(), f->components().begin(), f->components().end());
  return out;
}

double norm(const Point& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

void require_positive(const Expr& f, std::span<const Point> samples, const char* what) {
  for (const auto& x : samples) {
    const double v = f.eval(x);
    if (!(v > 0.0)) throw PreconditionError("positivity", std::string(what) + " is not positive at a sample point", v);
  }
}

}  // namespace

Report divergence_identity_check(const VectorField& x, const VectorField& y, const VolumeForm& omega,
                                 const VerifyOptions& opts) {
  require_same_chart(x.chart(), y.chart(), "divergence_identity_check");
  const Expr lhs = x.apply(divergence(y, omega)) - y.apply(divergence(x, omega));
  const Expr rhs = divergence(lie_bracket(x, y), omega);
  const Expr residual = lhs - rhs;
  auto exprs = components_of({&x, &y});
  exprs.push_back(omega.density());
  const auto samples = sample_points(x.chart(), opts, defined_at(exprs));
  Report r;
  r.check = "divergence_identity";
  r.tolerance = opts.tol;
  r.samples = samples.size();
  r.residual = residual_over(samples, [&](std::span<const double> p) { return residual.eval(p); });
  r.pass = r.residual.max_abs <= opts.tol;
  return r;
}

Report jacobi_multiplier_check(const Expr& r, const VectorField& x, const VolumeForm& omega,
                               const VerifyOptions& opts) {
  require_same_chart(x.chart(), omega.chart(), "jacobi_multiplier_check");
  auto exprs = components_of({&x});
  exprs.push_back(r);
  exprs.push_back(omega.density());
  const auto samples = sample_points(x.chart(), opts, defined_at(exprs));
  require_positive(r, samples, "multiplier");
  require_positive(omega.density(), samples, "volume density");

  const Expr residual = divergence(x, omega) + x.apply(log(r));
  Report rep;
  rep.check = "jacobi_multiplier";
  rep.tolerance = opts.tol;
  rep.samples = samples.size();
  rep.residual = residual_over(samples, [&](std::span<const double> p) { return residual.eval(p); });
  rep.pass = rep.residual.max_abs <= opts.tol;
  return rep;
}

Report scaling_covariance_check(const Expr& r, const VectorField& x, const VolumeForm& omega, const Expr& f,
                                const VerifyOptions& opts) {
  auto exprs = components_of({&x});
  exprs.push_back(f);
  const auto samples = sample_points(x.chart(), opts, defined_at(exprs));
  require_positive(f, samples, "scale function");

  const Report base = jacobi_multiplier_check(r, x, omega, opts);
  const Report scaled = jacobi_multiplier_check(f * r, x, omega.rescaled_by_inverse(f), opts);

  Report rep;
  rep.check = "multiplier_scaling_covariance";
  rep.tolerance = opts.tol;
  rep.samples = base.samples;
  rep.residual.max_abs = std::abs(base.residual.max_abs - scaled.residual.max_abs);
  rep.residual.count = base.samples;
  rep.details["original"] = base.to_json();
  rep.details["scaled"] = scaled.to_json();
  rep.pass = base.pass == scaled.pass;
  rep.details["co_pass"] = base.pass && scaled.pass;
  return rep;
}

Expr hessian_multiplier(const LagrangianSystem& sys) {
  if (!sys.regular) throw PreconditionError("regularity", "Lagrangian is degenerate (det W = 0 at a sample)");
  if (sys.hessian.size() <= 4) return sys.hessian_det;
  const ExprMatrix w = sys.hessian;
  return Expr::external("det_W", [w](std::span<const double> x) { return evaluate(w, x).fullPivLu().determinant(); });
}

SymmetryFit distribution_symmetry_fit(const VectorField& x, const VectorField& y, const VerifyOptions& opts,
                                      double tol) {
  require_same_chart(x.chart(), y.chart(), "distribution_symmetry_fit");
  const VectorField b = lie_bracket(y, x).simplified();
  const auto samples = sample_points(x.chart(), opts, defined_at(components_of({&x, &y})));

  auto least_squares = [x, b](std::span<const double> p) {
    const Point xv = x.eval(p);
    const Point bv = b.eval(p);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xv.size(); ++i) {
      num += bv[i] * xv[i];
      den += xv[i] * xv[i];
    }
    if (den == 0.0) throw NumericError("X vanishes at the evaluation point");
    return num / den;
  };

  SymmetryFit fit;
  Report& r = fit.report;
  r.check = "distribution_symmetry";
  r.tolerance = tol;
  r.samples = samples.size();
  std::vector<double> hs;
  for (const auto& p : samples) {
    const Point xv = x.eval(p);
    if (norm(xv) == 0.0) throw PreconditionError("nonvanishing", "X vanishes at a sample point");
    const Point bv = b.eval(p);
    const double h = least_squares(p);
    Point d(xv.size());
    for (std::size_t i = 0; i < xv.size(); ++i) d[i] = bv[i] - h * xv[i];
    r.residual.add(norm(d) / std::max(1.0, norm(bv)), p);
    hs.push_back(h);
  }
  r.details["relative_residual"] = r.residual.max_abs;
  if (r.residual.max_abs > tol) {
    throw PreconditionError("symmetry", "[Y,X] is not proportional to X", r.residual.max_abs);
  }
  r.pass = true;

  // Prefer an exact ratio of components when one reproduces the fit.
  if (x.is_symbolic() && y.is_symbolic()) {
    for (std::size_t k = 0; k < x.dim() && !fit.symbolic; ++k) {
      if (x[k].is_const(0.0)) continue;
      const Expr candidate = simplify(b[k] / x[k]);
      try {
        bool ok = true;
        for (std::size_t s = 0; s < samples.size() && ok; ++s) {
          ok = std::abs(candidate.eval(samples[s]) - hs[s]) <= 1e-9 * std::max(1.0, std::abs(hs[s]));
        }
        if (ok) {
          fit.h = candidate;
          fit.symbolic = true;
        }
      } catch (const DomainError&) {
      }
    }
  }
  if (!fit.symbolic) fit.h = Expr::external("h", least_squares);
  r.details["symbolic"] = fit.symbolic;
  if (fit.symbolic) r.details["h"] = fit.h.str(x.chart().names());
  return fit;
}

HojmanResult hojman_constant(const HojmanInput& in, const VerifyOptions& opts, double lie_tol,
                             const std::optional<DriftRequest>& drift_request) {
  const VectorField& x = in.x;
  const VectorField& y = in.y;
  require_same_chart(x.chart(), y.chart(), "hojman_constant");
  const Chart& chart = x.chart();
  const VolumeForm omega = in.volume ? *in.volume : VolumeForm(chart);

  auto exprs = components_of({&x, &y});
  if (in.multiplier) exprs.push_back(*in.multiplier);
  if (in.h) exprs.push_back(*in.h);
  const auto samples = sample_points(chart, opts, defined_at(exprs));

  HojmanResult out;
  Report& r = out.report;
  r.check = "hojman_constant";
  r.tolerance = lie_tol;
  r.samples = samples.size();

  if (in.multiplier) {
    const Report m = jacobi_multiplier_check(*in.multiplier, x, omega, opts);
    r.details["multiplier_check"] = m.to_json();
    if (!m.pass) throw PreconditionError("multiplier", "R is not a Jacobi multiplier of X", m.residual.max_abs);
  } else {
    const Expr div = divergence(x, omega);
    const double res = residual_over(samples, [&](std::span<const double> p) { return div.eval(p); }).max_abs;
    r.details["divergence_residual"] = res;
    if (res > opts.tol) {
      throw PreconditionError("divergence", "X is not divergence-free and no multiplier was supplied", res);
    }
  }

  Expr h;
  if (in.h) {
    h = *in.h;
    const VectorField d = (lie_bracket(y, x) - x.scaled(h)).simplified();
    const double res = residual_over(samples, [&](std::span<const double> p) { return norm(d.eval(p)); }).max_abs;
    r.details["symmetry_residual"] = res;
    if (res > 1e-7) throw PreconditionError("symmetry", "[Y,X] differs from h X", res);
  } else {
    const SymmetryFit fit = distribution_symmetry_fit(x, y, opts);
    h = fit.h;
    r.details["symmetry_fit"] = fit.report.to_json();
  }

  Expr value = divergence(y, omega) + h;
  if (in.multiplier) value = value + y.apply(log(*in.multiplier));
  out.value = simplify(value);
  if (out.value.is_symbolic()) r.details["constant"] = out.value.str(chart.names());

  double mean = 0.0, sq = 0.0;
  for (const auto& p : samples) {
    const double v = out.value.eval(p);
    mean += v;
    sq += v * v;
  }
  const double count = static_cast<double>(samples.size());
  mean /= count;
  out.variance = std::max(0.0, sq / count - mean * mean);
  out.trivial = out.variance <= 1e-12;
  r.details["mean"] = mean;
  r.details["variance"] = out.variance;
  r.details["trivial"] = out.trivial;

  const Expr lie = x.apply(out.value);
  r.residual = residual_over(samples, [&](std::span<const double> p) { return lie.eval(p); });
  r.pass = r.residual.max_abs <= lie_tol;

  if (drift_request) {
    const Trajectory traj = integrate(x, drift_request->x0, drift_request->T, drift_request->integrate);
    out.drift = drift("hojman_constant", out.value, traj, drift_request->tol);
    r.details["trajectory"] = traj.metadata();
    r.details["drift"] = out.drift->to_json();
    r.pass = r.pass && out.drift->pass;
  }
  return out;
}

}  // namespace gm
