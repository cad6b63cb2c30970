#include <doctest.h>

#include <cmath>

#include "geomech/error.hpp"
#include "geomech/geometry.hpp"
#include "support.hpp"

using gm::Expr;
using gm::PForm;
using gm::VectorField;

namespace {

const gm::Chart plane({"x", "y"}, gm::Flavor::Plain, gm::Box::cube(2, -2, 2));
const gm::Chart phase({"q", "p"}, gm::Flavor::Cotangent, gm::Box::cube(2, -2, 2));

VectorField field(const gm::Chart& c, std::vector<std::string> comps) { return VectorField::parse(c, comps); }

double max_field(const VectorField& v, const std::vector<gm::Point>& samples) {
  double m = 0.0;
  for (const auto& p : samples) m = std::max(m, v.max_abs_at(p));
  return m;
}

double max_form(const PForm& a, const std::vector<gm::Point>& samples) {
  double m = 0.0;
  for (const auto& p : samples) m = std::max(m, a.max_abs_at(p));
  return m;
}

std::vector<gm::Point> samples(const gm::Chart& c, std::uint64_t seed = 42, std::size_t n = 100) {
  gm::VerifyOptions o;
  o.seed = seed;
  o.samples = n;
  return gm::sample_points(c, o);
}

}  // namespace

TEST_CASE("permutation signs") {
  gm::Multi a = {2, 0, 1};
  CHECK(gm::sort_with_sign(a) == 1);
  CHECK(a == gm::Multi{0, 1, 2});
  gm::Multi b = {1, 0};
  CHECK(gm::sort_with_sign(b) == -1);
  gm::Multi c = {1, 1};
  CHECK(gm::sort_with_sign(c) == 0);
  CHECK(gm::increasing_multi_indices(4, 2).size() == 6);
  CHECK(gm::binomial(5, 2) == 10);
}

TEST_CASE("lie bracket examples") {
  const VectorField dx = field(plane, {"1", "0"});
  const VectorField xdy = field(plane, {"0", "x"});
  const auto s = samples(plane);
  CHECK(max_field(gm::lie_bracket(dx, xdy) - field(plane, {"0", "1"}), s) == 0.0);
  gm::Rng rng(1);
  const VectorField r = gmtest::random_field(rng, plane);
  CHECK(max_field(gm::lie_bracket(r, r), s) == 0.0);
  const VectorField rot = field(plane, {"y", "-x"}), dil = field(plane, {"x", "y"});
  CHECK(max_field(gm::lie_bracket(dil, rot), s) == 0.0);
}

TEST_CASE("lie bracket rejects mixed charts") {
  CHECK_THROWS_AS(gm::lie_bracket(field(plane, {"1", "0"}), field(phase, {"1", "0"})), gm::DimensionError);
}

TEST_CASE("exterior derivative examples") {
  const Expr f = plane.parse("x^2*y");
  const PForm df = gm::exterior_derivative(PForm::scalar(plane, f));
  const auto s = samples(plane);
  for (const auto& p : s) {
    CHECK(df.at({0}).eval(p) == doctest::Approx(2 * p[0] * p[1]));
    CHECK(df.at({1}).eval(p) == doctest::Approx(p[0] * p[0]));
  }
  CHECK(max_form(gm::exterior_derivative(df), s) == 0.0);
  PForm xdy(plane, 1);
  xdy.set({1}, plane.coord(0));
  const PForm d = gm::exterior_derivative(xdy);
  CHECK(d.at({0, 1}).is_const(1.0));
  // d of a top-degree form is the zero 3-form on the plane.
  const PForm dd = gm::exterior_derivative(d);
  CHECK(dd.degree() == 3);
  CHECK(dd.components().empty());
  CHECK(dd.max_abs_at(std::vector<double>{1, 1}) == 0.0);
}

TEST_CASE("interior product examples") {
  PForm w(phase, 2);
  w.set({0, 1}, Expr(1.0));
  const PForm a = gm::interior_product(field(phase, {"1", "0"}), w);
  CHECK(a.at({0}).is_const(0.0));
  CHECK(a.at({1}).is_const(1.0));
  const PForm b = gm::interior_product(field(phase, {"p", "-q"}), w);
  const auto s = samples(phase);
  for (const auto& p : s) {
    CHECK(b.at({0}).eval(p) == doctest::Approx(p[0]));
    CHECK(b.at({1}).eval(p) == doctest::Approx(p[1]));
  }
  CHECK_THROWS_AS(gm::interior_product(field(phase, {"1", "0"}), PForm::scalar(phase, Expr(1.0))),
                  gm::DimensionError);
}

TEST_CASE("property: i(X) i(X) alpha = 0") {
  const gm::Chart c = gmtest::plain_chart(4);
  gm::Rng rng(5);
  const auto s = samples(c, 5, 20);
  for (int t = 0; t < 20; ++t) {
    const VectorField x = gmtest::random_field(rng, c);
    for (std::size_t p = 2; p <= 4; ++p) {
      const PForm a = gmtest::random_form(rng, c, p);
      CHECK(max_form(gm::interior_product(x, gm::interior_product(x, a)), s) <= 1e-10);
    }
  }
}

TEST_CASE("wedge examples") {
  const PForm dq = PForm::coordinate_differential(phase, 0), dp = PForm::coordinate_differential(phase, 1);
  CHECK(gm::wedge(dq, dp).at({0, 1}).is_const(1.0));
  CHECK(gm::wedge(dp, dq).at({0, 1}).is_const(-1.0));

  const gm::Chart t({"q1", "q2", "p1", "p2"}, gm::Flavor::Cotangent, gm::Box::cube(4, -2, 2));
  auto d = [&](std::size_t i) { return PForm::coordinate_differential(t, i); };
  const PForm w = gm::wedge(d(0), d(2)) + gm::wedge(d(1), d(3));
  const PForm w2 = gm::wedge_power(w, 2);
  // dq1^dp1^dq2^dp2 = -dq1^dq2^dp1^dp2 in increasing index order
  CHECK(w2.at({0, 1, 2, 3}).eval(std::vector<double>{0, 0, 0, 0}) == -2.0);
  CHECK(gm::wedge(w2, d(0)).components().empty());
}

TEST_CASE("property: graded commutativity and associativity of the wedge") {
  const gm::Chart c = gmtest::plain_chart(4);
  gm::Rng rng(9);
  const auto s = samples(c, 9, 20);
  for (std::size_t p = 0; p <= 2; ++p) {
    for (std::size_t q = 0; q + p <= 4; ++q) {
      const PForm a = gmtest::random_form(rng, c, p), b = gmtest::random_form(rng, c, q);
      const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
      CHECK(max_form(gm::wedge(a, b) - gm::wedge(b, a).scaled(Expr(sign)), s) <= 1e-10);
      if (p + q + 1 <= 4) {
        const PForm e = gmtest::random_form(rng, c, 1);
        CHECK(max_form(gm::wedge(gm::wedge(a, b), e) - gm::wedge(a, gm::wedge(b, e)), s) <= 1e-10);
      }
    }
  }
}

TEST_CASE("lie derivative of forms") {
  const auto s = samples(plane);
  gm::Rng rng(2);
  const Expr f = gmtest::random_polynomial(rng, 2, 3);
  const VectorField x = gmtest::random_field(rng, plane);
  const PForm lf = gm::lie_derivative(x, PForm::scalar(plane, f));
  for (const auto& p : s) CHECK(lf.as_scalar().eval(p) == doctest::Approx(x.apply(f).eval(p)));

  PForm w(phase, 2);
  w.set({0, 1}, Expr(1.0));
  CHECK(max_form(gm::lie_derivative(field(phase, {"p", "-q"}), w), samples(phase)) == 0.0);

  PForm vol(plane, 2);
  vol.set({0, 1}, Expr(1.0));
  const PForm l = gm::lie_derivative(field(plane, {"x", "0"}), vol);
  CHECK(max_form(l - vol, s) == 0.0);
}

TEST_CASE("lie derivative of (1,1)-tensors") {
  const auto s = samples(plane);
  gm::Rng rng(4);
  const VectorField x = gmtest::random_field(rng, plane);
  const gm::Tensor11 id = gm::Tensor11::identity(plane);
  double m = 0.0;
  for (const auto& p : s) m = std::max(m, gm::lie_derivative(x, id).max_abs_at(p));
  CHECK(m == 0.0);
  const gm::Tensor11 c(plane, {{Expr(2.0), Expr(-1.0)}, {Expr(0.5), Expr(3.0)}});
  const gm::Tensor11 l = gm::lie_derivative(field(plane, {"1", "0"}), c);
  for (const auto& p : s) CHECK(l.max_abs_at(p) == 0.0);
}

TEST_CASE("property: (L_X R)(Y) = [X, R(Y)] - R([X, Y])") {
  const gm::Chart c = gmtest::plain_chart(3);
  gm::Rng rng(12);
  const auto s = samples(c, 12, 100);
  const VectorField x = gmtest::random_field(rng, c);
  std::vector<std::vector<Expr>> rc(3, std::vector<Expr>(3));
  for (auto& row : rc) {
    for (auto& e : row) e = gmtest::random_polynomial(rng, 3, 2, 3);
  }
  const gm::Tensor11 r(c, rc);
  const gm::Tensor11 lr = gm::lie_derivative(x, r);
  for (int k = 0; k < 20; ++k) {
    const VectorField y = gmtest::random_field(rng, c);
    const VectorField lhs = lr.apply(y);
    const VectorField rhs = gm::lie_bracket(x, r.apply(y)) - r.apply(gm::lie_bracket(x, y));
    CHECK(max_field(lhs - rhs, s) <= 1e-8);
  }
}

TEST_CASE("pullback examples") {
  const gm::Chart line({"t"}, gm::Flavor::Plain, gm::Box::cube(1, -2, 2));
  const Expr f = plane.parse("x^2 + y");
  const gm::ChartMap curve{line, plane, {line.parse("cos(t)"), line.parse("sin(t)")}};
  const PForm pf = gm::pullback(curve, PForm::scalar(plane, f));
  for (const auto& p : samples(line)) {
    CHECK(pf.as_scalar().eval(p) == doctest::Approx(std::cos(p[0]) * std::cos(p[0]) + std::sin(p[0])));
  }
  gm::Rng rng(6);
  const PForm a = gmtest::random_form(rng, plane, 1);
  const gm::ChartMap id{plane, plane, {plane.coord(0), plane.coord(1)}};
  CHECK(max_form(gm::pullback(id, a) - a, samples(plane)) <= 1e-14);

  // On a one-dimensional base alpha^*(dq^dp) = a'(q) dq^dq = 0.
  const gm::ChartMap section{line, phase, {line.parse("t"), line.parse("sin(t) + t^3")}};
  PForm w(phase, 2);
  w.set({0, 1}, Expr(1.0));
  const PForm pulled = gm::pullback(section, w);
  CHECK(pulled.degree() == 2);
  for (const auto& p : samples(line)) CHECK(pulled.max_abs_at(p) == 0.0);

  // Two-dimensional base: alpha^* omega = -d alpha, zero exactly for closed alpha.
  const gm::Chart t4({"q1", "q2", "p1", "p2"}, gm::Flavor::Cotangent, gm::Box::cube(4, -2, 2));
  PForm omega(t4, 2);
  omega.set({0, 2}, Expr(1.0));
  omega.set({1, 3}, Expr(1.0));
  const auto lift = [&](const char* a1, const char* a2) {
    return gm::ChartMap{plane, t4, {plane.coord(0), plane.coord(1), plane.parse(a1), plane.parse(a2)}};
  };
  CHECK(max_form(gm::pullback(lift("2*x*y", "x^2"), omega), samples(plane)) <= 1e-14);
  const PForm open = gm::pullback(lift("y", "0"), omega);
  for (const auto& p : samples(plane)) CHECK(open.at({0, 1}).eval(p) == doctest::Approx(1.0));
}

TEST_CASE("divergence") {
  const auto s = samples(plane);
  const Expr d = gm::divergence(field(plane, {"x", "y"}));
  for (const auto& p : s) CHECK(d.eval(p) == 2.0);

  gm::Rng rng(10);
  for (int k = 0; k < 5; ++k) {
    const Expr h = gmtest::random_polynomial(rng, 2, 3);
    const VectorField xh({phase}, {gm::diff(h, 1), -gm::diff(h, 0)});
    const Expr dh = gm::divergence(xh);
    for (const auto& p : samples(phase)) CHECK(std::abs(dh.eval(p)) <= 1e-12);
  }

  const gm::VolumeForm rho(plane, plane.parse("1 + x^2"));
  for (int k = 0; k < 10; ++k) {
    const VectorField x = gmtest::random_field(rng, plane);
    const Expr f = gmtest::random_polynomial(rng, 2, 2);
    const Expr lhs = gm::divergence(x.scaled(f), rho);
    const Expr rhs = f * gm::divergence(x, rho) + x.apply(f);
    for (const auto& p : s) CHECK(lhs.eval(p) == doctest::Approx(rhs.eval(p)).epsilon(1e-12));
  }
}

TEST_CASE("property: d(d alpha) = 0 in every degree") {
  const gm::Chart c = gmtest::plain_chart(4);
  gm::Rng rng(21);
  const auto s = samples(c, 21, 20);
  for (int t = 0; t < 10; ++t) {
    for (std::size_t p = 0; p <= 2; ++p) {
      const PForm a = gmtest::random_form(rng, c, p, 3);
      CHECK(max_form(gm::exterior_derivative(gm::exterior_derivative(a)), s) <= 1e-10);
    }
  }
}

TEST_CASE("property: Jacobi identity for the bracket") {
  const gm::Chart c = gmtest::plain_chart(3);
  gm::Rng rng(22);
  const auto s = samples(c, 22, 20);
  for (int t = 0; t < 10; ++t) {
    const VectorField x = gmtest::random_field(rng, c), y = gmtest::random_field(rng, c),
                      z = gmtest::random_field(rng, c);
    const VectorField j = gm::lie_bracket(gm::lie_bracket(x, y), z) + gm::lie_bracket(gm::lie_bracket(y, z), x) +
                          gm::lie_bracket(gm::lie_bracket(z, x), y);
    CHECK(max_field(j, s) <= 1e-9);
  }
}

TEST_CASE("property: commutator of Lie derivatives is the Lie derivative of the bracket") {
  const gm::Chart c = gmtest::plain_chart(3);
  gm::Rng rng(23);
  const auto s = samples(c, 23, 20);
  for (int t = 0; t < 10; ++t) {
    const VectorField x = gmtest::random_field(rng, c), y = gmtest::random_field(rng, c);
    const PForm a = gmtest::random_form(rng, c, 1 + t % 2);
    const PForm lhs = gm::lie_derivative(x, gm::lie_derivative(y, a)) - gm::lie_derivative(y, gm::lie_derivative(x, a));
    const PForm rhs = gm::lie_derivative(gm::lie_bracket(x, y), a);
    CHECK(max_form(lhs - rhs, s) <= 1e-7);
  }
}

TEST_CASE("property: Cartan formula agrees with the derivative of the flow pullback") {
  const gm::Chart c = gmtest::plain_chart(3, -1, 1);
  gm::Rng rng(24);
  const auto s = samples(c, 24, 3);
  for (int t = 0; t < 6; ++t) {
    const VectorField x = gmtest::random_field(rng, c);
    const PForm a = gmtest::random_form(rng, c, t % 4);
    const PForm l = gm::lie_derivative(x, a);
    for (const auto& p : s) CHECK(gmtest::max_diff(l, p, gmtest::lie_derivative_by_flow(x, a, p)) <= 1e-5);
  }
}

TEST_CASE("procedural fields evaluate through their rule") {
  const VectorField x = VectorField::procedural(plane, "rot", [](std::span<const double> p, std::span<double> out) {
    out[0] = p[1];
    out[1] = -p[0];
  });
  CHECK_FALSE(x.is_symbolic());
  const auto j = gm::jacobian_at(x, std::vector<double>{0.3, 0.4});
  CHECK(j[0][1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(j[1][0] == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(gm::divergence(x).eval(std::vector<double>{0.3, 0.4}) == doctest::Approx(0.0).epsilon(1e-8));
}
