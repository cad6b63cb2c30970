#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "geomech/geometry.hpp"
#include "geomech/report.hpp"

namespace gmtest {

/// x1..xn on [lo, hi]^n.
gm::Chart plain_chart(std::size_t n, double lo = -2.0, double hi = 2.0);

/// Sum of `terms` monomials of total degree <= `degree`, coefficients in [-1, 1].
gm::Expr random_polynomial(gm::Rng& rng, std::size_t n, std::size_t degree, std::size_t terms = 4);

/// Random smooth expression built from functions that are defined on all of R^n.
gm::Expr random_smooth(gm::Rng& rng, std::size_t n, int depth);

gm::VectorField random_field(gm::Rng& rng, const gm::Chart& chart, std::size_t degree = 2);
gm::PForm random_form(gm::Rng& rng, const gm::Chart& chart, std::size_t p, std::size_t degree = 2);

/// Central difference of f in direction i.
double central_difference(const std::function<double(std::span<const double>)>& f, std::span<const double> x,
                          std::size_t i, double h = 1e-6);

/// d/dt (phi_t^* alpha)(x) at t = 0, where phi_t is the flow of X. The flow
/// and its Jacobian come from an RK4 integration of the variational system
/// (step 1e-4); the t-derivative is a Richardson-extrapolated central
/// difference starting at t = 1e-2. Components follow alpha.multi_indices().
std::vector<double> lie_derivative_by_flow(const gm::VectorField& x, const gm::PForm& alpha,
                                           std::span<const double> at);

/// Max over components of |a(x) - b|.
double max_diff(const gm::PForm& a, std::span<const double> x, std::span<const double> b);

}  // namespace gmtest
