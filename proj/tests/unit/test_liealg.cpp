#include <doctest.h>

#include <cmath>

#include "geomech/error.hpp"
#include "geomech/liealg.hpp"
#include "support.hpp"

using gm::VectorField;

namespace {

const gm::Chart plane({"x", "y"}, gm::Flavor::Plain, gm::Box::cube(2, -2, 2));
const gm::Chart quadrant({"x", "y"}, gm::Flavor::Plain, gm::Box{{0.5, 0.5}, {2, 2}});

VectorField field(const gm::Chart& c, std::vector<std::string> comps) { return VectorField::parse(c, comps); }

}  // namespace

TEST_CASE("commuting frame") {
  const std::vector<VectorField> f = {field(plane, {"1", "0"}), field(plane, {"0", "1"})};
  const gm::StructureConstants c = gm::structure_constants(f);
  for (double v : c.c) CHECK(v == 0.0);
  const gm::LieAlgebraReport r = gm::solvability(c);
  CHECK(r.solvable);
  CHECK(r.nilpotent);
  CHECK(r.derived_series == std::vector<std::size_t>{2, 0});
}

TEST_CASE("affine algebra is solvable but not nilpotent") {
  const std::vector<VectorField> f = {field(plane, {"1", "0"}), field(plane, {"x", "0"})};
  const gm::StructureConstants c = gm::structure_constants(f);
  CHECK(c(0, 1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c(1, 0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(c(0, 1, 1)) <= 1e-12);
  CHECK(c.max_spread <= 1e-9);
  const gm::LieAlgebraReport r = gm::solvability(c);
  CHECK(r.solvable);
  CHECK_FALSE(r.nilpotent);
  CHECK(r.derived_series == std::vector<std::size_t>{2, 1, 0});
  CHECK(r.lower_central_series.back() == 1);
}

TEST_CASE("Heisenberg algebra is nilpotent") {
  const std::vector<VectorField> f = {field(plane, {"1", "0"}), field(plane, {"0", "1"}), field(plane, {"0", "x"})};
  const gm::StructureConstants c = gm::structure_constants(f);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        const double expected = (i == 0 && j == 2 && k == 1) ? 1.0 : (i == 2 && j == 0 && k == 1) ? -1.0 : 0.0;
        CHECK(std::abs(c(i, j, k) - expected) <= 1e-9);
      }
    }
  }
  const gm::LieAlgebraReport r = gm::solvability(c);
  CHECK(r.nilpotent);
  CHECK(r.solvable);
  CHECK(r.lower_central_series == std::vector<std::size_t>{3, 1, 0});
}

TEST_CASE("sl2 is neither solvable nor nilpotent") {
  const gm::Chart line({"x"}, gm::Flavor::Plain, gm::Box::cube(1, -2, 2));
  const std::vector<VectorField> f = {field(line, {"1"}), field(line, {"x"}), field(line, {"x^2"})};
  const gm::StructureConstants c = gm::structure_constants(f);
  const gm::LieAlgebraReport r = gm::solvability(c);
  CHECK_FALSE(r.solvable);
  CHECK_FALSE(r.nilpotent);
  CHECK(r.derived_series == std::vector<std::size_t>{3});
}

TEST_CASE("property: antisymmetry, Jacobi and nilpotent implies solvable") {
  const std::vector<std::vector<VectorField>> families = {
      {field(plane, {"1", "0"}), field(plane, {"x", "0"})},
      {field(plane, {"1", "0"}), field(plane, {"0", "1"}), field(plane, {"0", "x"})},
      {field(plane, {"1", "0"}), field(plane, {"0", "1"}), field(plane, {"y", "-x"})},
      {field(plane, {"x", "0"}), field(plane, {"0", "y"}), field(plane, {"1", "0"}), field(plane, {"0", "1"})},
  };
  for (const auto& f : families) {
    const gm::StructureConstants c = gm::structure_constants(f);
    CHECK(c.antisymmetry_residual <= 1e-12);
    CHECK(c.jacobi_residual <= 1e-8);
    const gm::LieAlgebraReport r = gm::solvability(c);
    if (r.nilpotent) CHECK(r.solvable);
    for (std::size_t i = 1; i < r.derived_series.size(); ++i) CHECK(r.derived_series[i] <= r.derived_series[i - 1]);
    for (std::size_t i = 1; i < r.lower_central_series.size(); ++i) {
      CHECK(r.lower_central_series[i] <= r.lower_central_series[i - 1]);
    }
  }
}

TEST_CASE("fields that do not close are rejected") {
  const std::vector<VectorField> f = {field(plane, {"1", "0"}), field(plane, {"0", "x^2"})};
  try {
    gm::structure_constants(f);
    FAIL("expected PreconditionError");
  } catch (const gm::PreconditionError& e) {
    CHECK(e.check() == "closure");
  }
}

TEST_CASE("dependent frames are rejected") {
  const std::vector<VectorField> f = {field(plane, {"1", "0"}), field(plane, {"2", "0"})};
  try {
    gm::structure_constants(f);
    FAIL("expected PreconditionError");
  } catch (const gm::PreconditionError& e) {
    CHECK(e.check() == "frame");
  }
}

TEST_CASE("Gauss-Kronrod quadrature") {
  CHECK(gm::integrate_1d([](double t) { return std::exp(t); }, 0, 1) == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-13));
  CHECK(gm::integrate_1d([](double t) { return t * t; }, 2, 0) == doctest::Approx(-8.0 / 3).epsilon(1e-13));
}

TEST_CASE("planar first integral of rotation and dilation") {
  const VectorField x1 = field(quadrant, {"y", "-x"}), x2 = field(quadrant, {"x", "y"});
  const std::vector<double> base = {1, 1};
  const gm::PlanarFirstIntegral f = gm::lie_first_integral_2d(x1, x2, base, quadrant.box());
  CHECK(f.report.pass);
  CHECK(std::abs(f.lambda) <= 1e-9);
  gm::VerifyOptions o;
  for (const auto& p : gm::sample_points(quadrant, o)) {
    const double exact = 0.5 * std::log((p[0] * p[0] + p[1] * p[1]) / 2.0);
    CHECK(std::abs(f.value.eval(p) - exact) <= 1e-9);
  }
  CHECK(f.report.details["X1F_residual"].get<double>() <= 1e-8);
  CHECK(f.report.details["X2F_minus_one_residual"].get<double>() <= 1e-6);
  CHECK(f.report.details["path_independence_residual"].get<double>() <= 1e-8);
}

TEST_CASE("planar first integral with [X1, X2] = X1") {
  const VectorField x1 = field(plane, {"1", "0"}), x2 = field(plane, {"x", "1"});
  const std::vector<double> base = {0, 0};
  const gm::PlanarFirstIntegral f = gm::lie_first_integral_2d(x1, x2, base, plane.box());
  CHECK(f.lambda == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.report.pass);
  gm::VerifyOptions o;
  for (const auto& p : gm::sample_points(plane, o)) CHECK(std::abs(f.value.eval(p) - p[1]) <= 1e-9);
}

TEST_CASE("planar first integral preconditions") {
  const std::vector<double> base = {1, 1};
  // [X1, X2] = 2x X1: lambda is not constant
  const VectorField x1 = field(quadrant, {"1", "0"}), x2 = field(quadrant, {"x^2", "1"});
  try {
    gm::lie_first_integral_2d(x1, x2, base, quadrant.box());
    FAIL("expected PreconditionError");
  } catch (const gm::PreconditionError& e) {
    CHECK(e.check() == "lambda");
  }
  // X2 parallel to X1: i(X2) alpha0 vanishes.
  try {
    gm::lie_first_integral_2d(field(quadrant, {"1", "0"}), field(quadrant, {"2", "0"}), base, quadrant.box());
    FAIL("expected PreconditionError");
  } catch (const gm::PreconditionError& e) {
    CHECK(e.check() == "transversality");
  }
}
