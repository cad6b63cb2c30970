#include "geomech/flow.hpp"

#include <algorithm>
#include <cmath>

#include "geomech/error.hpp"

namespace gm {

std::string_view to_string(Method m) { return m == Method::RK4 ? "rk4" : "rkf45"; }

Method method_from_string(std::string_view s) {
  if (s == "rk4") return Method::RK4;
  if (s == "rkf45") return Method::RKF45;
  throw Error("unknown integration method '" + std::string(s) + "'");
}

namespace {

void axpy(std::span<const double> x, double a, std::span<const double> k, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
}

class Rk4Stepper {
 public:
  Rk4Stepper(const VectorField& f, std::size_t n) : f_(f), k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  void step(std::span<double> x, double h) {
    f_.eval(x, k1_);
    axpy(x, 0.5 * h, k1_, tmp_);
    f_.eval(tmp_, k2_);
    axpy(x, 0.5 * h, k2_, tmp_);
    f_.eval(tmp_, k3_);
    axpy(x, h, k3_, tmp_);
    f_.eval(tmp_, k4_);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  const VectorField& f_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

// Fehlberg 4(5) tableau.
constexpr double kC[6] = {0.0, 1.0 / 4.0, 3.0 / 8.0, 12.0 / 13.0, 1.0, 1.0 / 2.0};
constexpr double kA[6][5] = {
    {0, 0, 0, 0, 0},
    {1.0 / 4.0, 0, 0, 0, 0},
    {3.0 / 32.0, 9.0 / 32.0, 0, 0, 0},
    {1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0, 0, 0},
    {439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0, 0},
    {-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0},
};
constexpr double kB4[6] = {25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0, 0.0};
constexpr double kB5[6] = {16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0, -9.0 / 50.0, 2.0 / 55.0};

}  // namespace

Json Trajectory::metadata() const {
  Json j;
  j["method"] = std::string(to_string(method));
  if (method == Method::RK4) {
    j["step"] = step;
  } else {
    j["initial_step"] = step;
    j["abs_tol"] = abs_tol;
    j["rel_tol"] = rel_tol;
    j["rejected_steps"] = rejected_steps;
  }
  j["accepted_steps"] = accepted_steps;
  j["left_box"] = left_box;
  return j;
}

Trajectory integrate(const VectorField& field, std::span<const double> x0, double T, const IntegrateOptions& opts) {
  const std::size_t n = field.dim();
  if (x0.size() != n) throw DimensionError("initial state dimension does not match the field");
  if (!(T >= 0.0)) throw Error("integration horizon must be nonnegative");
  if (!(opts.step > 0.0)) throw Error("integration step must be positive");
  const Box& box = opts.box ? *opts.box : field.chart().box();

  Trajectory traj;
  traj.method = opts.method;
  traj.step = opts.step;
  traj.abs_tol = opts.abs_tol;
  traj.rel_tol = opts.rel_tol;
  traj.times.push_back(0.0);
  traj.states.emplace_back(x0.begin(), x0.end());
  if (!box.contains(x0)) {
    traj.left_box = true;
    return traj;
  }
  Point x(x0.begin(), x0.end());

  if (opts.method == Method::RK4) {
    const double steps_real = T / opts.step;
    auto steps = static_cast<std::size_t>(std::ceil(steps_real - 1e-9));
    if (steps > opts.max_steps) throw NumericError("too many integration steps requested");
    Rk4Stepper rk(field, n);
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    for (std::size_t k = 1; k <= steps; ++k) {
      const double t_prev = static_cast<double>(k - 1) * opts.step;
      const double t_next = k == steps ? T : static_cast<double>(k) * opts.step;
      rk.step(x, t_next - t_prev);
      ++traj.accepted_steps;
      // The first state outside the box is dropped: stored states stay inside.
      if (!box.contains(x)) {
        traj.left_box = true;
        break;
      }
      traj.times.push_back(t_next);
      traj.states.push_back(x);
    }
    return traj;
  }

  // Adaptive Fehlberg 4(5); the fifth-order solution is propagated.
  std::vector<std::vector<double>> k(6, std::vector<double>(n));
  std::vector<double> tmp(n), y5(n);
  double t = 0.0;
  double h = std::min(opts.step, T);
  while (t < T) {
    if (traj.accepted_steps + traj.rejected_steps > opts.max_steps) throw NumericError("too many integration steps");
    if (t + h > T) h = T - t;
    for (int s = 0; s < 6; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = x[i];
        for (int r = 0; r < s; ++r) acc += h * kA[s][r] * k[r][i];
        tmp[i] = acc;
      }
      field.eval(tmp, k[s]);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s4 = 0.0;
      double s5 = 0.0;
      for (int s = 0; s < 6; ++s) {
        s4 += kB4[s] * k[s][i];
        s5 += kB5[s] * k[s][i];
      }
      y5[i] = x[i] + h * s5;
      const double e = h * (s5 - s4);
      const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(x[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    if (!std::isfinite(err)) throw NumericError("non-finite state during adaptive integration");
    if (err <= 1.0) {
      t = (T - (t + h) < 1e-15 * std::max(1.0, T)) ? T : t + h;
      x = y5;
      ++traj.accepted_steps;
      if (!box.contains(x)) {
        traj.left_box = true;
        break;
      }
      traj.times.push_back(t);
      traj.states.push_back(x);
    } else {
      ++traj.rejected_steps;
    }
    const double factor = err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.1, 4.0);
    h *= factor;
    if (t < T && h < opts.min_step) throw NumericError("adaptive step underflow at t = " + std::to_string(t));
  }
  return traj;
}

Trajectory integrate_in_box(const VectorField& field, std::span<const double> x0, double T,
                            const IntegrateOptions& opts) {
  Trajectory traj = integrate(field, x0, T, opts);
  if (traj.left_box) {
    throw NumericError("trajectory left the chart box at t = " + std::to_string(traj.final_time()));
  }
  return traj;
}

Point flow_map(const VectorField& field, std::span<const double> x0, double t, double microstep) {
  Point x(x0.begin(), x0.end());
  if (t == 0.0) return x;
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(t) / microstep - 1e-9));
  const double h = t / static_cast<double>(steps);
  Rk4Stepper rk(field, x.size());
  for (std::size_t k = 0; k < steps; ++k) rk.step(x, h);
  return x;
}

Json DriftReport::to_json() const {
  Json j;
  j["quantity"] = quantity;
  j["initial"] = initial;
  j["max_abs_deviation"] = max_abs;
  j["max_rel_deviation"] = max_rel;
  j["tolerance"] = tolerance;
  j["states"] = states;
  j["verdict"] = pass ? "pass" : "fail";
  return j;
}

DriftReport drift(const std::string& name, const ScalarFunction& f, const Trajectory& traj, double tol) {
  DriftReport r;
  r.quantity = name;
  r.tolerance = tol;
  r.states = traj.states.size();
  if (traj.states.empty()) throw Error("drift of an empty trajectory");
  r.initial = f(traj.states.front());
  for (const auto& x : traj.states) {
    const double d = std::abs(f(x) - r.initial);
    if (std::isnan(d)) {
      r.max_abs = std::numeric_limits<double>::infinity();
      break;
    }
    r.max_abs = std::max(r.max_abs, d);
  }
  r.max_rel = r.max_abs / std::max(1.0, std::abs(r.initial));
  r.pass = r.max_rel <= tol && !traj.left_box;
  return r;
}

DriftReport drift(const std::string& name, const Expr& f, const Trajectory& traj, double tol) {
  return drift(name, [&f](std::span<const double> x) { return f.eval(x); }, traj, tol);
}

}  // namespace gm
