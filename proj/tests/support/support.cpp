#include "support.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace gmtest {

using gm::Expr;

gm::Chart plain_chart(std::size_t n, double lo, double hi) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return gm::Chart(names, gm::Flavor::Plain, gm::Box::cube(n, lo, hi));
}

Expr random_polynomial(gm::Rng& rng, std::size_t n, std::size_t degree, std::size_t terms) {
  Expr out(rng.uniform(-1, 1));
  for (std::size_t t = 0; t < terms; ++t) {
    Expr m(rng.uniform(-1, 1));
    const auto d = static_cast<std::size_t>(rng.uniform() * static_cast<double>(degree + 1));
    for (std::size_t k = 0; k < std::min(d, degree); ++k) {
      m = m * Expr::var(static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n);
    }
    out = out + m;
  }
  return out;
}

Expr random_smooth(gm::Rng& rng, std::size_t n, int depth) {
  if (depth <= 0 || rng.uniform() < 0.2) {
    if (rng.uniform() < 0.3) return Expr(std::round(rng.uniform(-30, 30)) / 10);
    return Expr::var(static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n);
  }
  const Expr a = random_smooth(rng, n, depth - 1);
  const Expr b = random_smooth(rng, n, depth - 1);
  switch (static_cast<int>(rng.uniform() * 11)) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    case 3: return a / (Expr(1.5) + b * b);
    case 4: return gm::sin(a);
    case 5: return gm::cos(a);
    case 6: return gm::exp(a / Expr(4.0));
    case 7: return gm::log(Expr(1.0) + a * a);
    case 8: return gm::sqrt(Expr(2.0) + a * a);
    case 9: return gm::atan(a);
    default: return gm::pow(a, Expr(static_cast<double>(1 + static_cast<int>(rng.uniform() * 3))));
  }
}

gm::VectorField random_field(gm::Rng& rng, const gm::Chart& chart, std::size_t degree) {
  std::vector<Expr> c;
  for (std::size_t i = 0; i < chart.dim(); ++i) c.push_back(random_polynomial(rng, chart.dim(), degree, 3));
  return gm::VectorField(chart, c);
}

gm::PForm random_form(gm::Rng& rng, const gm::Chart& chart, std::size_t p, std::size_t degree) {
  const std::size_t count = gm::binomial(chart.dim(), p);
  std::vector<Expr> c;
  for (std::size_t i = 0; i < count; ++i) c.push_back(random_polynomial(rng, chart.dim(), degree, 3));
  return gm::PForm(chart, p, c);
}

double central_difference(const std::function<double(std::span<const double>)>& f, std::span<const double> x,
                          std::size_t i, double h) {
  std::vector<double> a(x.begin(), x.end()), b(x.begin(), x.end());
  a[i] += h;
  b[i] -= h;
  return (f(a) - f(b)) / (2 * h);
}

namespace {

struct FlowState {
  Eigen::VectorXd y;
  Eigen::MatrixXd m;  // dy/dx
};

FlowState variational_rhs(const gm::VectorField& x, const FlowState& s) {
  const std::vector<double> y(s.y.data(), s.y.data() + s.y.size());
  const auto j = gm::jacobian_at(x, y);
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd dx(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) dx(r, c) = j[r][c];
  }
  const gm::Point v = x.eval(y);
  return {Eigen::Map<const Eigen::VectorXd>(v.data(), n), dx * s.m};
}

FlowState flow_with_jacobian(const gm::VectorField& x, std::span<const double> x0, double t) {
  const auto n = static_cast<Eigen::Index>(x0.size());
  FlowState s{Eigen::Map<const Eigen::VectorXd>(x0.data(), n), Eigen::MatrixXd::Identity(n, n)};
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / 1e-4)));
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const FlowState k1 = variational_rhs(x, s);
    const FlowState k2 = variational_rhs(x, {s.y + h / 2 * k1.y, s.m + h / 2 * k1.m});
    const FlowState k3 = variational_rhs(x, {s.y + h / 2 * k2.y, s.m + h / 2 * k2.m});
    const FlowState k4 = variational_rhs(x, {s.y + h * k3.y, s.m + h * k3.m});
    s.y += h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
    s.m += h / 6 * (k1.m + 2 * k2.m + 2 * k3.m + k4.m);
  }
  return s;
}

// Components of phi_t^* alpha at x: sum_J alpha_J(phi_t(x)) det(Dphi[J, I]).
std::vector<double> pulled_back(const gm::VectorField& x, const gm::PForm& alpha, std::span<const double> at,
                                double t) {
  const FlowState s = flow_with_jacobian(x, at, t);
  const std::vector<double> y(s.y.data(), s.y.data() + s.y.size());
  const auto& idx = alpha.multi_indices();
  std::vector<double> values(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) values[k] = alpha.components()[k].eval(y);
  const std::size_t p = alpha.degree();
  std::vector<double> out(idx.size(), 0.0);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      double minor = 1.0;
      if (p > 0) {
        Eigen::MatrixXd sub(p, p);
        for (std::size_t r = 0; r < p; ++r) {
          for (std::size_t c = 0; c < p; ++c) sub(r, c) = s.m(idx[j][r], idx[i][c]);
        }
        minor = sub.determinant();
      }
      out[i] += values[j] * minor;
    }
  }
  return out;
}

}  // namespace

std::vector<double> lie_derivative_by_flow(const gm::VectorField& x, const gm::PForm& alpha,
                                           std::span<const double> at) {
  auto central = [&](double h) {
    const auto plus = pulled_back(x, alpha, at, h);
    const auto minus = pulled_back(x, alpha, at, -h);
    std::vector<double> d(plus.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = (plus[k] - minus[k]) / (2 * h);
    return d;
  };
  const double h = 1e-2;
  const auto d1 = central(h), d2 = central(h / 2), d3 = central(h / 4);
  std::vector<double> out(d1.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double r1 = (4 * d2[k] - d1[k]) / 3;
    const double r2 = (4 * d3[k] - d2[k]) / 3;
    out[k] = (16 * r2 - r1) / 15;
  }
  return out;
}

double max_diff(const gm::PForm& a, std::span<const double> x, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) m = std::max(m, std::abs(a.components()[k].eval(x) - b[k]));
  return m;
}

}  // namespace gmtest
