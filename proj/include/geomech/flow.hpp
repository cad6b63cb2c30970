#pragma once

// ODE integration of vector fields and drift verification of candidate
// constants of motion along the resulting trajectories.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geomech/geometry.hpp"
#include "geomech/report.hpp"

namespace gm {

enum class Method { RK4, RKF45 };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

struct IntegrateOptions {
  Method method = Method::RK4;
  double step = 1e-3;        // fixed step (RK4) or initial step (RKF45)
  double abs_tol = 1e-10;    // RKF45
  double rel_tol = 1e-10;    // RKF45
  double min_step = 1e-14;   // RKF45 underflow threshold
  std::size_t max_steps = 50'000'000;
  std::optional<Box> box;    // defaults to the field's chart box
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Point> states;
  Method method = Method::RK4;
  double step = 0.0;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  bool left_box = false;  // integration stopped early at the chart box boundary

  const Point& final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
  Json metadata() const;
};

/// Integrate dx/dt = X(x) from x0 over [0, T]. The returned trajectory holds
/// every accepted step. When a state leaves the box the integration stops and
/// the partial trajectory is flagged with `left_box`.
Trajectory integrate(const VectorField& field, std::span<const double> x0, double T, const IntegrateOptions& opts = {});

/// Same as integrate but throws NumericError if the box was left.
Trajectory integrate_in_box(const VectorField& field, std::span<const double> x0, double T,
                            const IntegrateOptions& opts = {});

/// Time-t flow map by RK4 with steps no larger than `microstep`; t may be
/// negative. No box check.
Point flow_map(const VectorField& field, std::span<const double> x0, double t, double microstep = 1e-5);

struct DriftReport {
  std::string quantity;
  double initial = 0.0;
  double max_abs = 0.0;
  double max_rel = 0.0;  // max_abs / max(1, |initial|)
  double tolerance = 0.0;
  bool pass = false;
  std::size_t states = 0;

  Json to_json() const;
};

using ScalarFunction = std::function<double(std::span<const double>)>;

DriftReport drift(const std::string& name, const ScalarFunction& f, const Trajectory& traj, double tol);
DriftReport drift(const std::string& name, const Expr& f, const Trajectory& traj, double tol);

}  // namespace gm
