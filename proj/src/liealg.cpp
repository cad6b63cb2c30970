#include "geomech/liealg.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geomech/error.hpp"
#include "geomech/flow.hpp"
#include "geomech/linalg.hpp"

namespace gm {

namespace {

double frame_condition(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(s.size() - 1);
}

Eigen::VectorXd to_vector(const Point& p) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) v(static_cast<Eigen::Index>(i)) = p[i];
  return v;
}

}  // namespace

StructureConstants structure_constants(std::span<const VectorField> fields, std::span<const Point> samples,
                                       double constancy_tol) {
  const std::size_t m = fields.size();
  if (m == 0) throw DimensionError("structure constants of an empty family");
  if (samples.empty()) throw DimensionError("structure constants need at least one sample");
  const Chart& chart = fields[0].chart();
  for (const auto& f : fields) require_same_chart(chart, f.chart(), "structure_constants");
  const std::size_t dim = chart.dim();
  const auto rows = static_cast<Eigen::Index>(dim);
  const auto cols = static_cast<Eigen::Index>(m);

  std::vector<VectorField> brackets(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      brackets[i * m + j] = i == j ? VectorField::zero(chart) : lie_bracket(fields[i], fields[j]);
    }
  }

  StructureConstants sc;
  sc.n = m;
  sc.samples = samples.size();
  sc.c.assign(m * m * m, 0.0);
  sc.spread.assign(m * m * m, 0.0);

  // Pointwise route: a genuine frame is solved sample by sample and the
  // across-sample spread measures constancy.
  std::vector<Eigen::MatrixXd> frames;
  bool pointwise = m == dim;
  for (const auto& x : samples) {
    Eigen::MatrixXd e(rows, cols);
    for (std::size_t k = 0; k < m; ++k) e.col(static_cast<Eigen::Index>(k)) = to_vector(fields[k].eval(x));
    if (pointwise && numerical_rank(e) < m) pointwise = false;
    frames.push_back(std::move(e));
  }

  if (pointwise) {
    std::vector<double> sum(m * m * m, 0.0), sum_sq(m * m * m, 0.0);
    for (std::size_t s = 0; s < samples.size(); ++s) {
      sc.max_condition_number = std::max(sc.max_condition_number, frame_condition(frames[s]));
      Eigen::FullPivLU<Eigen::MatrixXd> lu(frames[s]);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          const Eigen::VectorXd c = lu.solve(to_vector(brackets[i * m + j].eval(samples[s])));
          for (std::size_t k = 0; k < m; ++k) {
            const double v = c(static_cast<Eigen::Index>(k));
            sum[(i * m + j) * m + k] += v;
            sum_sq[(i * m + j) * m + k] += v * v;
          }
        }
      }
    }
    const double count = static_cast<double>(samples.size());
    for (std::size_t q = 0; q < sum.size(); ++q) {
      sc.c[q] = sum[q] / count;
      const double var = std::max(0.0, sum_sq[q] / count - sc.c[q] * sc.c[q]);
      sc.spread[q] = std::sqrt(var);
      sc.max_spread = std::max(sc.max_spread, sc.spread[q]);
    }
  } else {
    // Family that is not a pointwise frame (e.g. {d/dx, x d/dx}): the fields
    // must still be independent over R, so stack all samples into one
    // least-squares problem and measure the fit residual instead.
    Eigen::MatrixXd stacked(rows * static_cast<Eigen::Index>(samples.size()), cols);
    for (std::size_t s = 0; s < samples.size(); ++s) stacked.middleRows(static_cast<Eigen::Index>(s) * rows, rows) = frames[s];
    if (numerical_rank(stacked) < m) {
      throw PreconditionError("frame", "vector fields are linearly dependent over the reals on the samples");
    }
    sc.max_condition_number = frame_condition(stacked);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        Eigen::VectorXd rhs(stacked.rows());
        for (std::size_t s = 0; s < samples.size(); ++s) {
          rhs.segment(static_cast<Eigen::Index>(s) * rows, rows) = to_vector(brackets[i * m + j].eval(samples[s]));
        }
        const Eigen::VectorXd c = qr.solve(rhs);
        const Eigen::VectorXd resid = stacked * c - rhs;
        for (std::size_t s = 0; s < samples.size(); ++s) {
          const double r = resid.segment(static_cast<Eigen::Index>(s) * rows, rows).cwiseAbs().maxCoeff();
          sc.max_spread = std::max(sc.max_spread, r);
        }
        for (std::size_t k = 0; k < m; ++k) sc.c[(i * m + j) * m + k] = c(static_cast<Eigen::Index>(k));
      }
    }
  }

  if (sc.max_spread > constancy_tol) {
    throw PreconditionError("closure", "brackets do not close with constant coefficients (fields do not span a real Lie algebra)",
                            sc.max_spread);
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        sc.antisymmetry_residual = std::max(sc.antisymmetry_residual, std::abs(sc(i, j, k) + sc(j, i, k)));
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
          double acc = 0.0;
          for (std::size_t q = 0; q < m; ++q) {
            acc += sc(i, j, q) * sc(q, k, l) + sc(j, k, q) * sc(q, i, l) + sc(k, i, q) * sc(q, j, l);
          }
          sc.jacobi_residual = std::max(sc.jacobi_residual, std::abs(acc));
        }
      }
    }
  }
  return sc;
}

StructureConstants structure_constants(std::span<const VectorField> fields, const VerifyOptions& opts,
                                       double constancy_tol) {
  if (fields.empty()) throw DimensionError("structure constants of an empty family");
  std::vector<Expr> comps;
  for (const auto& f : fields) comps.insert(comps.end(), f.components().begin(), f.components().end());
  const auto samples = sample_points(fields[0].chart(), opts, defined_at(comps));
  return structure_constants(fields, samples, constancy_tol);
}

Json StructureConstants::to_json() const {
  Json j;
  j["dimension"] = n;
  Json nonzero = Json::array();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t k = 0; k < n; ++k) {
        const double v = (*this)(a, b, k);
        if (a < b && std::abs(v) > 1e-12) nonzero.push_back(Json{{"i", a + 1}, {"j", b + 1}, {"k", k + 1}, {"value", v}});
      }
    }
  }
  j["nonzero"] = nonzero;
  j["max_spread"] = max_spread;
  j["antisymmetry_residual"] = antisymmetry_residual;
  j["jacobi_residual"] = jacobi_residual;
  j["max_condition_number"] = max_condition_number;
  j["samples"] = samples;
  return j;
}

namespace {

// Bracket of coefficient vectors u, v in the algebra with constants c.
Eigen::RowVectorXd bracket(const StructureConstants& c, const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& v) {
  const std::size_t n = c.n;
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = u(static_cast<Eigen::Index>(i)) * v(static_cast<Eigen::Index>(j));
      if (w == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) out(static_cast<Eigen::Index>(k)) += w * c(i, j, k);
    }
  }
  return out;
}

Eigen::MatrixXd span_of_brackets(const StructureConstants& c, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 double rank_tol, double scale) {
  const auto n = static_cast<Eigen::Index>(c.n);
  Eigen::MatrixXd stack(a.rows() * b.rows(), n);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) stack.row(r++) = bracket(c, a.row(i), b.row(j));
  }
  return row_space_basis(stack.topRows(r), rank_tol, scale);
}

}  // namespace

LieAlgebraReport solvability(const StructureConstants& c, double rank_tol) {
  LieAlgebraReport rep;
  const auto n = static_cast<Eigen::Index>(c.n);
  double scale = 0.0;
  for (double v : c.c) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1.0);

  const Eigen::MatrixXd whole = Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd cur = whole;
  rep.derived_series.push_back(c.n);
  while (cur.rows() > 0) {
    Eigen::MatrixXd next = span_of_brackets(c, cur, cur, rank_tol, scale);
    if (next.rows() == cur.rows()) break;
    rep.derived_series.push_back(static_cast<std::size_t>(next.rows()));
    cur = std::move(next);
  }
  rep.solvable = rep.derived_series.back() == 0;

  cur = whole;
  rep.lower_central_series.push_back(c.n);
  while (cur.rows() > 0) {
    Eigen::MatrixXd next = span_of_brackets(c, whole, cur, rank_tol, scale);
    if (next.rows() == cur.rows()) break;
    rep.lower_central_series.push_back(static_cast<std::size_t>(next.rows()));
    cur = std::move(next);
  }
  rep.nilpotent = rep.lower_central_series.back() == 0;
  return rep;
}

Json LieAlgebraReport::to_json() const {
  Json j;
  j["solvable"] = solvable;
  j["nilpotent"] = nilpotent;
  j["derived_series"] = derived_series;
  j["lower_central_series"] = lower_central_series;
  return j;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_1d(f, b, a, tol);
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, tol, &err);
}

namespace {

double line_integral_xy(const PForm& alpha, std::span<const double> base, std::span<const double> x, double tol) {
  const Expr& ax = alpha.components()[0];
  const Expr& ay = alpha.components()[1];
  const double b1 = base[1];
  const double x0 = x[0];
  const double leg1 = integrate_1d([&](double s) { return ax.eval(std::array<double, 2>{s, b1}); }, base[0], x0, tol);
  const double leg2 = integrate_1d([&](double s) { return ay.eval(std::array<double, 2>{x0, s}); }, b1, x[1], tol);
  return leg1 + leg2;
}

double line_integral_yx(const PForm& alpha, std::span<const double> base, std::span<const double> x, double tol) {
  const Expr& ax = alpha.components()[0];
  const Expr& ay = alpha.components()[1];
  const double b0 = base[0];
  const double x1 = x[1];
  const double leg1 = integrate_1d([&](double s) { return ay.eval(std::array<double, 2>{b0, s}); }, base[1], x1, tol);
  const double leg2 = integrate_1d([&](double s) { return ax.eval(std::array<double, 2>{s, x1}); }, b0, x[0], tol);
  return leg1 + leg2;
}

}  // namespace

double path_independence_residual(const PForm& alpha, std::span<const double> base, std::span<const double> x,
                                  double quadrature_tol) {
  return std::abs(line_integral_xy(alpha, base, x, quadrature_tol) - line_integral_yx(alpha, base, x, quadrature_tol));
}

PlanarFirstIntegral lie_first_integral_2d(const VectorField& x1, const VectorField& x2, std::span<const double> base,
                                          const Box& region, const VerifyOptions& opts,
                                          const QuadratureOptions& qopts) {
  const Chart& chart = x1.chart();
  require_same_chart(chart, x2.chart(), "lie_first_integral_2d");
  if (chart.dim() != 2) throw DimensionError("planar first integral requires a 2-dimensional chart");
  if (region.dim() != 2 || !region.contains(base)) throw DimensionError("base point must lie in the region");

  VerifyOptions sopts = opts;
  sopts.box = region;
  std::vector<Expr> comps = x1.components();
  comps.insert(comps.end(), x2.components().begin(), x2.components().end());
  const auto samples = sample_points(chart, sopts, defined_at(comps));

  PlanarFirstIntegral out;
  Report& rep = out.report;
  rep.check = "lie_first_integral_2d";
  rep.tolerance = qopts.contract_tol;
  rep.samples = samples.size();

  // [X1, X2] = lambda X1 with lambda constant.
  const VectorField b = lie_bracket(x1, x2);
  ResidualStats lambda_fit;
  double lsum = 0.0, lsq = 0.0;
  for (const auto& x : samples) {
    const Point bx = b.eval(x);
    const Point ux = x1.eval(x);
    const double nn = ux[0] * ux[0] + ux[1] * ux[1];
    if (nn == 0.0) throw PreconditionError("independence", "X1 vanishes at a sample point");
    const double lam = (bx[0] * ux[0] + bx[1] * ux[1]) / nn;
    lambda_fit.add(std::hypot(bx[0] - lam * ux[0], bx[1] - lam * ux[1]), x);
    lsum += lam;
    lsq += lam * lam;
  }
  const double count = static_cast<double>(samples.size());
  out.lambda = lsum / count;
  const double lambda_std = std::sqrt(std::max(0.0, lsq / count - out.lambda * out.lambda));
  rep.details["lambda"] = out.lambda;
  rep.details["lambda_spread"] = lambda_std;
  rep.details["lambda_fit_residual"] = lambda_fit.max_abs;
  if (lambda_fit.max_abs > qopts.lambda_tol) {
    throw PreconditionError("lambda", "[X1,X2] is not proportional to X1", lambda_fit.max_abs);
  }
  if (lambda_std > qopts.lambda_tol) {
    throw PreconditionError("lambda", "[X1,X2] = lambda X1 with non-constant lambda", lambda_std);
  }

  // alpha0 annihilates X1; normalise so that i(X2) alpha = 1.
  PForm alpha0(chart, 1, {-x1[1], x1[0]});
  const Expr g = simplify(interior_product(x2, alpha0).as_scalar());
  double min_g = std::numeric_limits<double>::infinity();
  for (const auto& x : samples) min_g = std::min(min_g, std::abs(g.eval(x)));
  rep.details["min_abs_i_X2_alpha0"] = min_g;
  if (!(min_g > 1e-12)) throw PreconditionError("transversality", "i(X2) alpha0 vanishes on the region", min_g);
  out.alpha = alpha0.scaled(Expr(1.0) / g).simplified();

  const PForm dalpha = exterior_derivative(out.alpha);
  const double closure =
      residual_over(samples, [&](std::span<const double> x) { return dalpha.max_abs_at(x); }).max_abs;
  rep.details["closure_residual"] = closure;
  if (closure > qopts.closure_tol) {
    throw PreconditionError("closedness", "d alpha does not vanish (F would be path dependent)", closure);
  }

  const PForm alpha = out.alpha;
  const Point base_pt(base.begin(), base.end());
  const double qtol = qopts.quadrature_tol;
  out.value = Expr::external(
      "F", [alpha, base_pt, qtol](std::span<const double> x) { return line_integral_xy(alpha, base_pt, x, qtol); });

  // Contract checks via symmetric flow differences: along X2 the value of F
  // must grow at unit rate, along X1 it must not change.
  const double h = qopts.flow_step;
  ResidualStats x1f, x2f, path;
  const std::size_t path_samples = std::min<std::size_t>(samples.size(), 25);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& x = samples[s];
    const double d1 = (out.value.eval(flow_map(x1, x, h, h / 10)) - out.value.eval(flow_map(x1, x, -h, h / 10))) / (2 * h);
    const double d2 = (out.value.eval(flow_map(x2, x, h, h / 10)) - out.value.eval(flow_map(x2, x, -h, h / 10))) / (2 * h);
    x1f.add(d1, x);
    x2f.add(d2 - 1.0, x);
    if (s < path_samples) path.add(path_independence_residual(alpha, base_pt, x, qtol), x);
  }
  rep.residual = x1f;
  rep.details["X1F_residual"] = x1f.max_abs;
  rep.details["X2F_minus_one_residual"] = x2f.max_abs;
  rep.details["path_independence_residual"] = path.max_abs;
  rep.details["base"] = point_to_json(base);
  rep.pass = x1f.max_abs <= qopts.contract_tol && x2f.max_abs <= qopts.contract_tol;
  return out;
}

}  // namespace gm
