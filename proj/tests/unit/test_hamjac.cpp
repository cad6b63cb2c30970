#include <doctest.h>

#include <cmath>

#include "geomech/error.hpp"
#include "geomech/hamjac.hpp"
#include "geomech/symplectic.hpp"

using gm::Expr;

namespace {

const double qmax = 0.9 * std::sqrt(2.0);
const gm::Chart free_chart({"q", "p"}, gm::Flavor::Cotangent, gm::Box{{-2, -3}, {2, 3}});
const gm::Chart osc_chart({"q", "p"}, gm::Flavor::Cotangent, gm::Box{{-qmax, -2}, {qmax, 2}});
const gm::Chart t2({"q1", "q2", "p1", "p2"}, gm::Flavor::Cotangent, gm::Box::cube(4, -2, 2));

gm::HJProblem oscillator() {
  return gm::HJProblem::from_alpha(osc_chart, osc_chart.parse("(p^2 + q^2)/2"), {osc_chart.parse("sqrt(2 - q^2)")});
}

std::vector<gm::Point> base_samples(const gm::HJProblem& prob, std::size_t n = 100) {
  gm::VerifyOptions o;
  o.samples = n;
  return gm::sample_points(prob.base(), o);
}

}  // namespace

TEST_CASE("reduced field") {
  const gm::HJProblem p = gm::HJProblem::from_alpha(free_chart, free_chart.parse("p^2/2"), {Expr(1.5)});
  const gm::VectorField z = gm::hj_reduced_field(p);
  CHECK(z.dim() == 1);
  CHECK(z[0].eval(std::vector<double>{0.3}) == 1.5);

  const gm::HJProblem zero =
      gm::HJProblem::from_alpha(free_chart, free_chart.parse("p^2/2 + q^4"), {Expr(0.0)});
  CHECK(gm::hj_reduced_field(zero)[0].eval(std::vector<double>{0.7}) == 0.0);
}

TEST_CASE("reduced field is the projection of X_H along alpha") {
  const gm::Chart& c = t2;
  const Expr h = c.parse("(p1^2 + p2^2)/2 + p1*p2*q1 + sin(q2)*p1");
  const gm::HJProblem prob = gm::HJProblem::from_alpha(c, h, {c.parse("q1*q2"), c.parse("cos(q1) + q2^2")});
  const gm::VectorField z = gm::hj_reduced_field(prob);
  const gm::VectorField xh = gm::hamiltonian_vector_field(h, gm::canonical_symplectic(c));
  for (const auto& q : base_samples(prob)) {
    const std::vector<double> x = {q[0], q[1], prob.alpha[0].eval(q), prob.alpha[1].eval(q)};
    const auto lifted = xh.eval(x);
    const auto zq = z.eval(q);
    CHECK(std::abs(zq[0] - lifted[0]) <= 1e-10);
    CHECK(std::abs(zq[1] - lifted[1]) <= 1e-10);
  }
}

TEST_CASE("relatedness residual") {
  const gm::HJProblem free = gm::HJProblem::from_generating(free_chart, free_chart.parse("p^2/2"), free_chart.base().parse("2*q"));
  CHECK(gm::hj_residual(free).report.pass);
  CHECK(gm::hj_residual(free).report.residual.max_abs == 0.0);

  const gm::HJResidual osc = gm::hj_residual(oscillator());
  CHECK(osc.report.pass);
  CHECK(osc.report.residual.max_abs <= 1e-9);

  const gm::HJProblem bad = gm::HJProblem::from_alpha(free_chart, free_chart.parse("p^2/2"), {free_chart.parse("q")});
  const gm::HJResidual r = gm::hj_residual(bad);
  CHECK_FALSE(r.report.pass);
  for (const auto& q : base_samples(bad, 20)) CHECK(r.residual.at({0}).eval(q) == doctest::Approx(q[0]));
}

TEST_CASE("two-dimensional relatedness residual") {
  const Expr h = t2.parse("(p1^2 + p2^2)/2");
  const gm::HJProblem closed = gm::HJProblem::from_generating(t2, h, t2.base().parse("q1*q2"));
  const gm::HJResidual r = gm::hj_residual(closed);
  // alpha^* H = (q2^2 + q1^2)/2 is not constant and alpha is closed: the residual is d(alpha^* H).
  CHECK_FALSE(r.report.pass);
  for (const auto& q : base_samples(closed, 20)) {
    CHECK(r.residual.at({0}).eval(q) == doctest::Approx(q[0]));
    CHECK(r.residual.at({1}).eval(q) == doctest::Approx(q[1]));
  }
  CHECK(r.report.details["closure_residual"].get<double>() <= 1e-12);
}

TEST_CASE("standard solutions") {
  const gm::HJStandard f =
      gm::hj_standard_check(gm::HJProblem::from_generating(free_chart, free_chart.parse("p^2/2"), free_chart.base().parse("3*q")));
  CHECK(f.report.pass);
  CHECK(f.energy == 4.5);
  CHECK(f.stddev == 0.0);
  CHECK(f.reduced[0].eval(std::vector<double>{0.1}) == 3.0);

  const gm::HJProblem osc = gm::HJProblem::from_generating(
      osc_chart, osc_chart.parse("(p^2 + q^2)/2"), osc_chart.base().parse("q*sqrt(2 - q^2)/2 + asin(q/sqrt(2))"));
  const gm::HJStandard o = gm::hj_standard_check(osc);
  CHECK(o.report.pass);
  CHECK(std::abs(o.energy - 1.0) <= 1e-10);
  CHECK(o.report.details["variance"].get<double>() <= 1e-10);

  const gm::HJStandard bad =
      gm::hj_standard_check(gm::HJProblem::from_generating(free_chart, free_chart.parse("p^2/2"), free_chart.base().parse("q^2")));
  CHECK_FALSE(bad.report.pass);
  CHECK(bad.stddev > 0.1);
}

TEST_CASE("generating functions give closed alpha") {
  const gm::Chart base = t2.base();
  const gm::HJProblem p = gm::HJProblem::from_generating(t2, t2.parse("p1*p2"), base.parse("sin(q1)*exp(q2) + q1^3*q2"));
  for (const auto& q : base_samples(p)) {
    CHECK(std::abs(gm::diff(p.alpha[0], 1).eval(q) - gm::diff(p.alpha[1], 0).eval(q)) <= 1e-12);
  }
}

TEST_CASE("lifting integral curves") {
  const gm::HJProblem free = gm::HJProblem::from_alpha(free_chart, free_chart.parse("p^2/2"), {Expr(1.25)});
  const gm::Report f = gm::lift_and_compare(free, std::vector<double>{0.0}, 1.0);
  CHECK(f.pass);
  CHECK(f.residual.max_abs <= 1e-12);

  const gm::HJProblem still = gm::HJProblem::from_alpha(free_chart, free_chart.parse("p^2/2"), {Expr(0.0)});
  CHECK(gm::lift_and_compare(still, std::vector<double>{0.5}, 1.0).residual.max_abs == 0.0);

  const gm::Report o = gm::lift_and_compare(oscillator(), std::vector<double>{0.0}, 1.0);
  CHECK(o.pass);
  CHECK(o.residual.max_abs <= 1e-6);
  CHECK(o.details["tangency_residual"].get<double>() <= 1e-6);

  CHECK_THROWS_AS(gm::lift_and_compare(free, std::vector<double>{0.0}, 5.0), gm::NumericError);
}
