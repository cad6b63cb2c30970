#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geomech/error.hpp"
#include "geomech/flow.hpp"

using gm::Expr;

namespace {

const gm::Chart line({"x"}, gm::Flavor::Plain, gm::Box::cube(1, -10, 10));
const gm::Chart phase({"q", "p"}, gm::Flavor::Cotangent, gm::Box::cube(2, -2, 2));

const gm::VectorField growth(line, {line.parse("x")});
const gm::VectorField oscillator(phase, {phase.parse("p"), phase.parse("-q")});

double endpoint_error(double h) {
  gm::IntegrateOptions o;
  o.step = h;
  return std::abs(gm::integrate(growth, std::vector<double>{1.0}, 1.0, o).final_state()[0] - std::numbers::e);
}

}  // namespace

TEST_CASE("RK4 on x' = x") {
  const gm::Trajectory t = gm::integrate(growth, std::vector<double>{1.0}, 1.0);
  CHECK(t.final_time() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(t.final_state()[0] - std::numbers::e) <= 1e-10);
  CHECK(t.accepted_steps == 1000);
}

TEST_CASE("RK4 converges with order four") {
  for (double h : {0.1, 0.05, 0.02}) {
    const double ratio = endpoint_error(h) / endpoint_error(h / 2);
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
  }
}

TEST_CASE("zero field gives a constant trajectory") {
  const gm::VectorField z = gm::VectorField::zero(phase);
  const gm::Trajectory t = gm::integrate(z, std::vector<double>{0.5, -0.5}, 2.0);
  for (const auto& s : t.states) CHECK(s == gm::Point{0.5, -0.5});
}

TEST_CASE("oscillator returns after one period") {
  const gm::Trajectory t = gm::integrate(oscillator, std::vector<double>{1, 0}, 2 * std::numbers::pi);
  CHECK(std::abs(t.final_state()[0] - 1.0) <= 1e-8);
  CHECK(std::abs(t.final_state()[1]) <= 1e-8);
}

TEST_CASE("times are strictly increasing and end exactly at T") {
  const gm::Trajectory t = gm::integrate(oscillator, std::vector<double>{1, 0}, 0.01234);
  for (std::size_t i = 1; i < t.times.size(); ++i) CHECK(t.times[i] > t.times[i - 1]);
  CHECK(t.final_time() == 0.01234);
}

TEST_CASE("RKF45 adapts and meets its tolerance") {
  gm::IntegrateOptions o;
  o.method = gm::Method::RKF45;
  o.step = 0.1;
  const gm::Trajectory t = gm::integrate(growth, std::vector<double>{1.0}, 1.0, o);
  CHECK(std::abs(t.final_state()[0] - std::numbers::e) <= 1e-8);
  CHECK(t.accepted_steps < 1000);
  CHECK(t.final_time() == 1.0);
  const gm::Json m = t.metadata();
  CHECK(m["method"] == "rkf45");
  CHECK(m.contains("rejected_steps"));
}

TEST_CASE("leaving the box truncates and flags the trajectory") {
  const gm::Trajectory t = gm::integrate(growth, std::vector<double>{1.0}, 5.0);
  CHECK(t.left_box);
  CHECK(t.final_time() < 5.0);
  for (const auto& s : t.states) CHECK(std::abs(s[0]) <= 10.0);
  CHECK_THROWS_AS(gm::integrate_in_box(growth, std::vector<double>{1.0}, 5.0), gm::NumericError);
}

TEST_CASE("procedural fields integrate") {
  const gm::VectorField x = gm::VectorField::procedural(phase, "osc", [](std::span<const double> s, std::span<double> o) {
    o[0] = s[1];
    o[1] = -s[0];
  });
  const gm::Trajectory a = gm::integrate(x, std::vector<double>{1, 0}, 1.0);
  const gm::Trajectory b = gm::integrate(oscillator, std::vector<double>{1, 0}, 1.0);
  CHECK(a.final_state() == b.final_state());
}

TEST_CASE("integration is bitwise deterministic") {
  const gm::Trajectory a = gm::integrate(oscillator, std::vector<double>{0.3, 0.7}, 3.0);
  const gm::Trajectory b = gm::integrate(oscillator, std::vector<double>{0.3, 0.7}, 3.0);
  CHECK(a.states == b.states);
  CHECK(a.times == b.times);
}

TEST_CASE("drift reports") {
  const gm::Trajectory t = gm::integrate(oscillator, std::vector<double>{1, 0}, 100.0);
  const gm::DriftReport h = gm::drift("H", phase.parse("(q^2 + p^2)/2"), t, 1e-8);
  CHECK(h.pass);
  CHECK(h.initial == 0.5);
  const gm::DriftReport c = gm::drift("c", Expr(4.0), t, 1e-8);
  CHECK(c.max_abs == 0.0);
  const gm::DriftReport q = gm::drift("q", phase.parse("q"), t, 1e-8);
  CHECK_FALSE(q.pass);
  CHECK(q.max_abs == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(q.max_rel == q.max_abs);
  const gm::Json j = h.to_json();
  CHECK(j["quantity"] == "H");
  CHECK(j["verdict"] == "pass");
}

TEST_CASE("flow map runs backwards") {
  const gm::Point fwd = gm::flow_map(oscillator, std::vector<double>{1, 0}, 0.5);
  const gm::Point back = gm::flow_map(oscillator, fwd, -0.5);
  CHECK(std::abs(back[0] - 1.0) <= 1e-12);
  CHECK(std::abs(back[1]) <= 1e-12);
}

TEST_CASE("method names") {
  CHECK(gm::method_from_string("rk4") == gm::Method::RK4);
  CHECK(gm::method_from_string("rkf45") == gm::Method::RKF45);
  CHECK_THROWS_AS(gm::method_from_string("euler"), gm::Error);
}
