#include "geomech/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "geomech/error.hpp"
#include "geomech/linalg.hpp"

namespace gm {

int sort_with_sign(Multi& idx) {
  int sign = 1;
  // Insertion sort; each adjacent swap flips the sign.
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (idx[i - 1] == idx[i]) return 0;
  }
  return sign;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Multi> increasing_multi_indices(std::size_t n, std::size_t p) {
  std::vector<Multi> out;
  if (p > n) return out;
  Multi cur(p);
  for (std::size_t i = 0; i < p; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    if (p == 0) break;
    std::size_t k = p;
    while (k > 0 && cur[k - 1] == n - p + (k - 1)) --k;
    if (k == 0) break;
    ++cur[k - 1];
    for (std::size_t j = k; j < p; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(Chart chart, std::vector<Expr> components)
    : chart_(std::move(chart)), comps_(std::move(components)) {
  if (comps_.size() != chart_.dim()) {
    throw DimensionError("vector field has " + std::to_string(comps_.size()) + " components on a chart of dimension " +
                         std::to_string(chart_.dim()));
  }
  for (const auto& c : comps_) require_on_chart(c, chart_, "vector field component");
}

VectorField VectorField::zero(const Chart& chart) { return VectorField(chart, std::vector<Expr>(chart.dim())); }

VectorField VectorField::coordinate(const Chart& chart, std::size_t i) {
  std::vector<Expr> c(chart.dim());
  c.at(i) = Expr(1.0);
  return VectorField(chart, std::move(c));
}

VectorField VectorField::parse(const Chart& chart, std::span<const std::string> components) {
  std::vector<Expr> c;
  c.reserve(components.size());
  for (const auto& s : components) c.push_back(chart.parse(s));
  return VectorField(chart, std::move(c));
}

VectorField VectorField::procedural(Chart chart, std::string name, VectorRule rule, double fd_step) {
  const std::size_t n = chart.dim();
  std::vector<Expr> comps;
  comps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto fn = [rule, i, n](std::span<const double> x) {
      std::vector<double> out(n);
      rule(x, out);
      return out[i];
    };
    comps.push_back(Expr::external(name + "^" + std::to_string(i), std::move(fn), {}, fd_step));
  }
  VectorField v(std::move(chart), std::move(comps));
  v.rule_ = std::move(rule);
  return v;
}

bool VectorField::is_symbolic() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Expr& e) { return e.is_symbolic(); });
}

void VectorField::eval(std::span<const double> x, std::span<double> out) const {
  if (rule_) {
    rule_(x, out);
    return;
  }
  for (std::size_t i = 0; i < comps_.size(); ++i) out[i] = comps_[i].eval(x);
}

Point VectorField::eval(std::span<const double> x) const {
  Point out(comps_.size());
  eval(x, out);
  return out;
}

Expr VectorField::apply(const Expr& f) const {
  Expr acc;
  for (std::size_t k = 0; k < comps_.size(); ++k) {
    if (comps_[k].is_const(0.0)) continue;
    acc = acc + comps_[k] * diff(f, k);
  }
  return acc;
}

VectorField VectorField::operator+(const VectorField& other) const {
  require_same_chart(chart_, other.chart_, "vector field sum");
  std::vector<Expr> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = comps_[i] + other.comps_[i];
  return VectorField(chart_, std::move(c));
}

VectorField VectorField::operator-(const VectorField& other) const {
  require_same_chart(chart_, other.chart_, "vector field difference");
  std::vector<Expr> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = comps_[i] - other.comps_[i];
  return VectorField(chart_, std::move(c));
}

VectorField VectorField::scaled(const Expr& f) const {
  std::vector<Expr> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = f * comps_[i];
  return VectorField(chart_, std::move(c));
}

VectorField VectorField::simplified() const {
  if (rule_) return *this;
  std::vector<Expr> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = simplify(comps_[i]);
  return VectorField(chart_, std::move(c));
}

double VectorField::max_abs_at(std::span<const double> x) const {
  double m = 0.0;
  for (double v : eval(x)) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// PForm

PForm::PForm(Chart chart, std::size_t degree)
    : chart_(std::move(chart)), degree_(degree), indices_(increasing_multi_indices(chart_.dim(), degree)) {
  // Above the chart dimension there are no components: the zero form.
  comps_.assign(indices_.size(), Expr());
}

PForm::PForm(Chart chart, std::size_t degree, std::vector<Expr> components) : PForm(std::move(chart), degree) {
  if (components.size() != comps_.size()) {
    throw DimensionError("a " + std::to_string(degree_) + "-form on a " + std::to_string(chart_.dim()) +
                         "-dimensional chart has " + std::to_string(comps_.size()) + " components, got " +
                         std::to_string(components.size()));
  }
  for (const auto& c : components) require_on_chart(c, chart_, "form component");
  comps_ = std::move(components);
}

PForm PForm::scalar(const Chart& chart, const Expr& f) { return PForm(chart, 0, {f}); }

PForm PForm::coordinate_differential(const Chart& chart, std::size_t i) {
  PForm a(chart, 1);
  a.set({i}, Expr(1.0));
  return a;
}

std::size_t PForm::rank_of(const Multi& increasing) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), increasing);
  if (it == indices_.end() || *it != increasing) throw DimensionError("multi-index outside form");
  return static_cast<std::size_t>(it - indices_.begin());
}

const Expr& PForm::at(const Multi& increasing) const { return comps_[rank_of(increasing)]; }

Expr PForm::signed_at(Multi idx) const {
  const int s = sort_with_sign(idx);
  if (s == 0) return Expr(0.0);
  const Expr& c = at(idx);
  return s > 0 ? c : -c;
}

void PForm::accumulate(Multi idx, const Expr& value) {
  const int s = sort_with_sign(idx);
  if (s == 0) return;
  Expr& c = comps_[rank_of(idx)];
  c = s > 0 ? c + value : c - value;
}

void PForm::set(const Multi& increasing, Expr value) {
  require_on_chart(value, chart_, "form component");
  comps_[rank_of(increasing)] = std::move(value);
}

const Expr& PForm::as_scalar() const {
  if (degree_ != 0) throw DimensionError("form is not a scalar");
  return comps_.front();
}

PForm PForm::operator+(const PForm& other) const {
  require_same_chart(chart_, other.chart_, "form sum");
  if (degree_ != other.degree_) throw DimensionError("form sum: degree mismatch");
  PForm r(chart_, degree_);
  for (std::size_t k = 0; k < comps_.size(); ++k) r.comps_[k] = comps_[k] + other.comps_[k];
  return r;
}

PForm PForm::operator-(const PForm& other) const {
  require_same_chart(chart_, other.chart_, "form difference");
  if (degree_ != other.degree_) throw DimensionError("form difference: degree mismatch");
  PForm r(chart_, degree_);
  for (std::size_t k = 0; k < comps_.size(); ++k) r.comps_[k] = comps_[k] - other.comps_[k];
  return r;
}

PForm PForm::operator-() const {
  PForm r(chart_, degree_);
  for (std::size_t k = 0; k < comps_.size(); ++k) r.comps_[k] = -comps_[k];
  return r;
}

PForm PForm::scaled(const Expr& f) const {
  PForm r(chart_, degree_);
  for (std::size_t k = 0; k < comps_.size(); ++k) r.comps_[k] = f * comps_[k];
  return r;
}

PForm PForm::simplified() const {
  PForm r(chart_, degree_);
  for (std::size_t k = 0; k < comps_.size(); ++k) r.comps_[k] = simplify(comps_[k]);
  return r;
}

PForm PForm::frozen_at(std::span<const double> x) const {
  PForm r(chart_, degree_);
  for (std::size_t k = 0; k < comps_.size(); ++k) r.comps_[k] = Expr(comps_[k].eval(x));
  return r;
}

double PForm::max_abs_at(std::span<const double> x) const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, std::abs(c.eval(x)));
  return m;
}

std::vector<std::vector<Expr>> PForm::matrix() const {
  if (degree_ != 2) throw DimensionError("component matrix requires a 2-form");
  const std::size_t n = chart_.dim();
  std::vector<std::vector<Expr>> m(n, std::vector<Expr>(n));
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const std::size_t i = indices_[k][0];
    const std::size_t j = indices_[k][1];
    m[i][j] = comps_[k];
    m[j][i] = -comps_[k];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Tensor11 / VolumeForm

Tensor11::Tensor11(Chart chart, std::vector<std::vector<Expr>> components)
    : chart_(std::move(chart)), comps_(std::move(components)) {
  if (comps_.size() != chart_.dim()) throw DimensionError("(1,1)-tensor must be n x n");
  for (const auto& row : comps_) {
    if (row.size() != chart_.dim()) throw DimensionError("(1,1)-tensor must be n x n");
    for (const auto& c : row) require_on_chart(c, chart_, "tensor component");
  }
}

Tensor11 Tensor11::identity(const Chart& chart) {
  const std::size_t n = chart.dim();
  std::vector<std::vector<Expr>> c(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) c[i][i] = Expr(1.0);
  return Tensor11(chart, std::move(c));
}

VectorField Tensor11::apply(const VectorField& y) const {
  require_same_chart(chart_, y.chart(), "tensor application");
  std::vector<Expr> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) out[i] = out[i] + comps_[i][j] * y[j];
  }
  return VectorField(chart_, std::move(out));
}

Tensor11 Tensor11::operator-(const Tensor11& other) const {
  require_same_chart(chart_, other.chart_, "tensor difference");
  auto c = comps_;
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) c[i][j] = c[i][j] - other.comps_[i][j];
  }
  return Tensor11(chart_, std::move(c));
}

double Tensor11::max_abs_at(std::span<const double> x) const {
  double m = 0.0;
  for (const auto& row : comps_) {
    for (const auto& c : row) m = std::max(m, std::abs(c.eval(x)));
  }
  return m;
}

VolumeForm::VolumeForm(Chart chart, Expr density) : chart_(std::move(chart)), density_(std::move(density)) {
  require_on_chart(density_, chart_, "volume density");
}

VolumeForm VolumeForm::rescaled_by_inverse(const Expr& f) const { return VolumeForm(chart_, density_ / f); }

// ---------------------------------------------------------------------------
// Operations

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_chart(x.chart(), y.chart(), "lie_bracket");
  const std::size_t n = x.dim();
  std::vector<Expr> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = simplify(x.apply(y[i]) - y.apply(x[i]));
  }
  return VectorField(x.chart(), std::move(out));
}

PForm exterior_derivative(const PForm& alpha) {
  const std::size_t n = alpha.chart().dim();
  if (alpha.degree() >= n) return PForm(alpha.chart(), alpha.degree() + 1);
  PForm out(alpha.chart(), alpha.degree() + 1);
  const auto& idx = alpha.multi_indices();
  const auto& comps = alpha.components();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (comps[k].is_const()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::find(idx[k].begin(), idx[k].end(), j) != idx[k].end()) continue;
      const Expr dj = diff(comps[k], j);
      if (dj.is_const(0.0)) continue;
      Multi m;
      m.reserve(idx[k].size() + 1);
      m.push_back(j);
      m.insert(m.end(), idx[k].begin(), idx[k].end());
      out.accumulate(std::move(m), dj);
    }
  }
  return out.simplified();
}

PForm interior_product(const VectorField& x, const PForm& alpha) {
  require_same_chart(x.chart(), alpha.chart(), "interior_product");
  if (alpha.degree() == 0) throw DimensionError("interior product of a degree-0 form");
  PForm out(alpha.chart(), alpha.degree() - 1);
  for (const auto& rest : out.multi_indices()) {
    Expr acc;
    for (std::size_t k = 0; k < x.dim(); ++k) {
      if (x[k].is_const(0.0)) continue;
      Multi m;
      m.reserve(rest.size() + 1);
      m.push_back(k);
      m.insert(m.end(), rest.begin(), rest.end());
      const Expr c = alpha.signed_at(std::move(m));
      if (c.is_const(0.0)) continue;
      acc = acc + x[k] * c;
    }
    out.set(rest, simplify(acc));
  }
  return out;
}

PForm wedge(const PForm& alpha, const PForm& beta) {
  require_same_chart(alpha.chart(), beta.chart(), "wedge");
  const std::size_t p = alpha.degree();
  const std::size_t q = beta.degree();
  if (p + q > alpha.chart().dim()) return PForm(alpha.chart(), p + q);
  PForm out(alpha.chart(), p + q);
  const auto& ia = alpha.multi_indices();
  const auto& ib = beta.multi_indices();
  for (std::size_t a = 0; a < ia.size(); ++a) {
    const Expr& ca = alpha.components()[a];
    if (ca.is_const(0.0)) continue;
    for (std::size_t b = 0; b < ib.size(); ++b) {
      const Expr& cb = beta.components()[b];
      if (cb.is_const(0.0)) continue;
      Multi m = ia[a];
      m.insert(m.end(), ib[b].begin(), ib[b].end());
      out.accumulate(std::move(m), ca * cb);
    }
  }
  return out.simplified();
}

PForm wedge_power(const PForm& alpha, std::size_t k) {
  if (k == 0) throw DimensionError("wedge power must be positive");
  PForm acc = alpha;
  for (std::size_t i = 1; i < k; ++i) acc = wedge(acc, alpha);
  return acc;
}

PForm lie_derivative(const VectorField& x, const PForm& alpha) {
  require_same_chart(x.chart(), alpha.chart(), "lie_derivative");
  if (alpha.degree() == 0) return PForm::scalar(alpha.chart(), simplify(x.apply(alpha.as_scalar())));
  PForm homotopy = exterior_derivative(interior_product(x, alpha));
  if (alpha.degree() < alpha.chart().dim()) {
    homotopy = homotopy + interior_product(x, exterior_derivative(alpha));
  }
  return homotopy.simplified();
}

Tensor11 lie_derivative(const VectorField& x, const Tensor11& r) {
  require_same_chart(x.chart(), r.chart(), "lie_derivative");
  const std::size_t n = x.dim();
  std::vector<std::vector<Expr>> out(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Expr acc = x.apply(r(i, j));
      for (std::size_t k = 0; k < n; ++k) {
        acc = acc - r(k, j) * diff(x[i], k) + r(i, k) * diff(x[k], j);
      }
      out[i][j] = simplify(acc);
    }
  }
  return Tensor11(x.chart(), std::move(out));
}

PForm pullback(const ChartMap& f, const PForm& alpha) {
  require_same_chart(f.target, alpha.chart(), "pullback");
  if (f.components.size() != f.target.dim()) throw DimensionError("pullback: map has wrong number of components");
  if (alpha.degree() > f.source.dim()) return PForm(f.source, alpha.degree());
  for (const auto& c : f.components) require_on_chart(c, f.source, "map component");

  const std::size_t p = alpha.degree();
  std::vector<std::vector<Expr>> jac(f.target.dim(), std::vector<Expr>(f.source.dim()));
  for (std::size_t a = 0; a < f.target.dim(); ++a) {
    for (std::size_t b = 0; b < f.source.dim(); ++b) jac[a][b] = diff(f.components[a], b);
  }
  PForm out(f.source, p);
  for (const auto& src : out.multi_indices()) {
    Expr acc;
    for (std::size_t k = 0; k < alpha.multi_indices().size(); ++k) {
      const Expr& ck = alpha.components()[k];
      if (ck.is_const(0.0)) continue;
      const Multi& tgt = alpha.multi_indices()[k];
      Expr minor_det(1.0);
      if (p > 0) {
        std::vector<std::vector<Expr>> minor(p, std::vector<Expr>(p));
        for (std::size_t r = 0; r < p; ++r) {
          for (std::size_t c = 0; c < p; ++c) minor[r][c] = jac[tgt[r]][src[c]];
        }
        minor_det = symbolic_determinant(minor);
      }
      if (minor_det.is_const(0.0)) continue;
      acc = acc + substitute(ck, f.components) * minor_det;
    }
    out.set(src, simplify(acc));
  }
  return out;
}

Expr divergence(const VectorField& x, const VolumeForm& omega) {
  require_same_chart(x.chart(), omega.chart(), "divergence");
  const Expr& rho = omega.density();
  if (rho.is_const()) return divergence(x);
  Expr acc;
  for (std::size_t i = 0; i < x.dim(); ++i) acc = acc + diff(rho * x[i], i);
  return simplify(acc / rho);
}

Expr divergence(const VectorField& x) {
  Expr acc;
  for (std::size_t i = 0; i < x.dim(); ++i) acc = acc + diff(x[i], i);
  return simplify(acc);
}

std::vector<std::vector<double>> jacobian_at(const VectorField& x, std::span<const double> at) {
  const std::size_t n = x.dim();
  std::vector<std::vector<double>> j(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) j[i][k] = diff(x[i], k).eval(at);
  }
  return j;
}

}  // namespace gm
