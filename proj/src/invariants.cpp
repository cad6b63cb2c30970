#include "geomech/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "geomech/error.hpp"

namespace gm {

namespace {

bool all_symbolic(const ExprMatrix& m) {
  for (const auto& row : m) {
    for (const auto& e : row) {
      if (!e.is_symbolic()) return false;
    }
  }
  return true;
}

Eigen::MatrixXd frame_at(std::span<const VectorField> frame, std::span<const double> x) {
  const auto n = static_cast<Eigen::Index>(frame.size());
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Point v = frame[static_cast<std::size_t>(k)].eval(x);
    for (Eigen::Index i = 0; i < n; ++i) e(i, k) = v[static_cast<std::size_t>(i)];
  }
  return e;
}

// Entry (i, j) of a matrix-valued function, as a procedural scalar.
ExprMatrix procedural_matrix(const std::string& name, std::size_t n,
                             const std::function<Eigen::MatrixXd(std::span<const double>)>& fn) {
  ExprMatrix out(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[i][j] = Expr::external(name + "_" + std::to_string(i + 1) + std::to_string(j + 1),
                                 [fn, i, j](std::span<const double> x) {
                                   return fn(x)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                                 });
    }
  }
  return out;
}

double top_component(const PForm& f) { return f.components().front().eval(std::span<const double>{}); }

// Top-degree coefficient of w^k ^ w'^(n-k) for frozen (constant) forms.
double mixed_top(const PForm& w, const PForm& wp, std::size_t k, std::size_t n) {
  if (k == 0) return top_component(wedge_power(wp, n));
  if (k == n) return top_component(wedge_power(w, n));
  return top_component(wedge(wedge_power(w, k), wedge_power(wp, n - k)));
}

Expr mixed_top_symbolic(const PForm& w, const PForm& wp, std::size_t k, std::size_t n) {
  if (k == 0) return wedge_power(wp, n).components().front();
  if (k == n) return wedge_power(w, n).components().front();
  return wedge(wedge_power(w, k), wedge_power(wp, n - k)).components().front();
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  Polynomial out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Square root of g (degree 2n, increasing powers) with leading coefficient
// `lead`; the lower half of g is not used and checked by the caller.
Polynomial polynomial_sqrt(const Polynomial& g, double lead) {
  const std::size_t n = (g.size() - 1) / 2;
  Polynomial f(n + 1, 0.0);
  f[n] = lead;
  for (std::size_t k = 1; k <= n; ++k) {
    double acc = g[2 * n - k];
    for (std::size_t i = n - k + 1; i < n; ++i) acc -= f[i] * f[2 * n - k - i];
    f[n - k] = acc / (2.0 * f[n]);
  }
  return f;
}

}  // namespace

bool LaxPair::symbolic() const { return all_symbolic(a) && all_symbolic(b); }

LaxPair lax_matrices(const Tensor11& r, const VectorField& x, std::span<const VectorField> frame,
                     const VerifyOptions& opts) {
  require_same_chart(r.chart(), x.chart(), "lax_matrices");
  const Chart& chart = x.chart();
  const std::size_t n = chart.dim();
  LaxPair pair;
  pair.chart = chart;

  if (frame.empty()) {
    pair.a.assign(n, std::vector<Expr>(n));
    pair.b.assign(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        pair.a[i][j] = r(j, i);
        pair.b[i][j] = simplify(-diff(x[j], i));
      }
    }
    return pair;
  }

  if (frame.size() != n) throw DimensionError("frame must contain one field per chart dimension");
  for (const auto& f : frame) require_same_chart(chart, f.chart(), "lax_matrices frame");
  std::vector<Expr> comps;
  for (const auto& f : frame) comps.insert(comps.end(), f.components().begin(), f.components().end());
  for (const auto& x0 : sample_points(chart, opts, defined_at(comps))) {
    if (numerical_rank(frame_at(frame, x0)) < n) throw PreconditionError("frame", "frame is degenerate at a sample point");
  }

  pair.coordinate_frame = false;
  const std::vector<VectorField> fr(frame.begin(), frame.end());
  std::vector<VectorField> images;
  std::vector<VectorField> brackets;
  for (const auto& f : fr) {
    images.push_back(r.apply(f));
    brackets.push_back(lie_bracket(x, f));
  }
  auto solve_in_frame = [fr](const std::vector<VectorField>& fields) {
    return [fr, fields](std::span<const double> p) -> Eigen::MatrixXd {
      const Eigen::MatrixXd e = frame_at(fr, p);
      const Eigen::MatrixXd rhs = frame_at(fields, p);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(e);
      if (!lu.isInvertible()) throw NumericError("frame is degenerate at the evaluation point");
      return lu.solve(rhs).transpose();
    };
  };
  pair.a = procedural_matrix("A", n, solve_in_frame(images));
  pair.b = procedural_matrix("B", n, solve_in_frame(brackets));
  return pair;
}

Report lax_residual(const LaxPair& pair, const VectorField& x, const VerifyOptions& opts) {
  const std::size_t n = pair.a.size();
  std::vector<Expr> all;
  for (const auto& row : pair.a) all.insert(all.end(), row.begin(), row.end());
  for (const auto& row : pair.b) all.insert(all.end(), row.begin(), row.end());
  const auto samples = sample_points(pair.chart, opts, defined_at(all));

  const bool exact = all_symbolic(pair.a) && x.is_symbolic();
  ExprMatrix adot;
  if (exact) {
    adot.assign(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) adot[i][j] = simplify(x.apply(pair.a[i][j]));
    }
  }
  const double h = 1e-4;

  Report r;
  r.check = "lax_equation";
  r.tolerance = opts.tol;
  r.samples = samples.size();
  r.residual = residual_over(samples, [&](std::span<const double> p) {
    Eigen::MatrixXd d;
    if (exact) {
      d = evaluate(adot, p);
    } else {
      d = (pair.a_at(flow_map(x, p, h, h / 10)) - pair.a_at(flow_map(x, p, -h, h / 10))) / (2 * h);
    }
    const Eigen::MatrixXd a = pair.a_at(p);
    const Eigen::MatrixXd b = pair.b_at(p);
    return (d - (b * a - a * b)).norm();
  });
  r.details["derivative"] = exact ? "symbolic" : "flow_difference";
  r.details["frame"] = pair.coordinate_frame ? "coordinate" : "user";
  r.pass = r.residual.max_abs <= opts.tol;
  return r;
}

std::vector<Expr> trace_invariants(const LaxPair& pair, std::size_t k_max) {
  const std::size_t n = pair.a.size();
  if (k_max > n) throw DimensionError("trace invariants limited to k <= n");
  std::vector<Expr> out;
  if (all_symbolic(pair.a)) {
    ExprMatrix power = pair.a;
    for (std::size_t k = 1; k <= k_max; ++k) {
      if (k > 1) power = multiply(power, pair.a);
      Expr tr;
      for (std::size_t i = 0; i < n; ++i) tr = tr + power[i][i];
      out.push_back(simplify(tr));
    }
    return out;
  }
  const ExprMatrix a = pair.a;
  for (std::size_t k = 1; k <= k_max; ++k) {
    out.push_back(Expr::external("tr_A" + std::to_string(k), [a, k](std::span<const double> x) {
      const Eigen::MatrixXd m = evaluate(a, x);
      Eigen::MatrixXd p = m;
      for (std::size_t i = 1; i < k; ++i) p = p * m;
      return p.trace();
    }));
  }
  return out;
}

std::vector<double> leverrier(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimensionError("Le Verrier requires a square matrix");
  const Eigen::Index n = a.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  if (n == 0) return c;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd m = a;
  c[1] = -m.trace();
  for (Eigen::Index k = 1; k < n; ++k) {
    m = a * (m + c[static_cast<std::size_t>(k)] * id);
    c[static_cast<std::size_t>(k) + 1] = -m.trace() / static_cast<double>(k + 1);
  }
  return c;
}

PencilCharacteristic pencil_characteristic(const SymplecticForm& omega, const PForm& omega_prime,
                                           std::span<const double> x, double tol) {
  require_same_chart(omega.chart(), omega_prime.chart(), "pencil_characteristic");
  if (omega_prime.degree() != 2) throw DimensionError("pencil requires a 2-form");
  const std::size_t dim = omega.dim();
  const std::size_t n = dim / 2;

  PencilCharacteristic out;
  out.tolerance = tol;

  const PForm w = omega.form().frozen_at(x);
  const PForm wp = omega_prime.frozen_at(x);
  const double volume = mixed_top(w, wp, n, n);
  if (volume == 0.0) throw NumericError("omega^n vanishes at the evaluation point");
  out.wedge_route.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    out.wedge_route[k] = sign * static_cast<double>(binomial(n, k)) * mixed_top(w, wp, k, n) / volume;
  }

  const Eigen::MatrixXd big = evaluate(omega.matrix(), x);
  const Eigen::MatrixXd small = evaluate(omega_prime.matrix(), x);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(big);
  if (!lu.isInvertible()) throw NumericError("omega is degenerate at the evaluation point");
  const Eigen::MatrixXd r = lu.solve(small);

  // det(R - lambda I) = det(lambda I - R) for even dimension; Le Verrier
  // returns the latter with decreasing powers.
  const std::vector<double> c = leverrier(r);
  out.recursion_charpoly.assign(dim + 1, 0.0);
  for (std::size_t k = 0; k <= dim; ++k) out.recursion_charpoly[dim - k] = c[k];
  out.leverrier_route = polynomial_sqrt(out.recursion_charpoly, n % 2 == 0 ? 1.0 : -1.0);

  for (std::size_t k = 0; k <= n; ++k) {
    out.route_residual = std::max(out.route_residual, std::abs(out.wedge_route[k] - out.leverrier_route[k]));
  }
  const Polynomial sq = multiply(out.wedge_route, out.wedge_route);
  for (std::size_t k = 0; k <= dim; ++k) {
    out.square_residual = std::max(out.square_residual, std::abs(sq[k] - out.recursion_charpoly[k]));
  }
  out.agree = out.route_residual <= tol && out.square_residual <= tol;
  return out;
}

Json PencilCharacteristic::to_json() const {
  Json j;
  j["coefficients"] = wedge_route;
  j["wedge_route"] = wedge_route;
  j["leverrier_route"] = leverrier_route;
  j["recursion_charpoly"] = recursion_charpoly;
  j["route_residual"] = route_residual;
  j["square_residual"] = square_residual;
  j["tolerance"] = tolerance;
  j["agree"] = agree;
  return j;
}

std::vector<Expr> pencil_coefficients(const SymplecticForm& omega, const PForm& omega_prime) {
  require_same_chart(omega.chart(), omega_prime.chart(), "pencil_coefficients");
  const std::size_t n = omega.dim() / 2;
  const Expr volume = mixed_top_symbolic(omega.form(), omega_prime, n, n);
  std::vector<Expr> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    out[k] = simplify(Expr(sign * static_cast<double>(binomial(n, k))) * mixed_top_symbolic(omega.form(), omega_prime, k, n) /
                      volume);
  }
  return out;
}

Tensor11 recursion_operator(const SymplecticForm& omega, const PForm& omega_prime) {
  require_same_chart(omega.chart(), omega_prime.chart(), "recursion_operator");
  if (omega_prime.degree() != 2) throw DimensionError("recursion operator requires a 2-form");
  const ExprMatrix wp = omega_prime.matrix();
  if (omega.inverse()) return Tensor11(omega.chart(), multiply(*omega.inverse(), wp));

  const ExprMatrix w = omega.matrix();
  const std::size_t n = omega.dim();
  auto fn = [w, wp](std::span<const double> x) -> Eigen::MatrixXd {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(evaluate(w, x));
    if (!lu.isInvertible()) throw NumericError("omega is degenerate at the evaluation point");
    return lu.solve(evaluate(wp, x));
  };
  return Tensor11(omega.chart(), procedural_matrix("R", n, fn));
}

Report tensor_invariance_check(const Tensor11& r, const VectorField& x, const VerifyOptions& opts) {
  const Tensor11 l = lie_derivative(x, r);
  std::vector<Expr> all;
  for (const auto& row : r.components()) all.insert(all.end(), row.begin(), row.end());
  const auto samples = sample_points(r.chart(), opts, defined_at(all));
  Report rep;
  rep.check = "tensor_invariance";
  rep.tolerance = opts.tol;
  rep.samples = samples.size();
  rep.residual = residual_over(samples, [&](std::span<const double> p) { return l.max_abs_at(p); });
  rep.pass = rep.residual.max_abs <= opts.tol;
  return rep;
}

PForm pencil_from_symmetry(const VectorField& y, const SymplecticForm& omega) {
  return lie_derivative(y, omega.form()).simplified();
}

Report closed_form_check(const PForm& form, const VerifyOptions& opts, double tol) {
  Report r;
  r.check = "closedness";
  r.tolerance = tol;
  if (form.degree() >= form.chart().dim()) {
    r.pass = true;
    return r;
  }
  const PForm d = exterior_derivative(form);
  const auto samples = sample_points(form.chart(), opts, defined_at(form.components()));
  r.samples = samples.size();
  r.residual = residual_over(samples, [&](std::span<const double> p) { return d.max_abs_at(p); });
  r.pass = r.residual.max_abs <= tol;
  return r;
}

}  // namespace gm
