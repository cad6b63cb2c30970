#include "geomech/chart.hpp"

#include <algorithm>
#include <set>

#include "geomech/error.hpp"

namespace gm {

std::string_view to_string(Flavor f) {
  switch (f) {
    case Flavor::Plain: return "plain";
    case Flavor::Tangent: return "tangent";
    case Flavor::Cotangent: return "cotangent";
  }
  return "plain";
}

Flavor flavor_from_string(std::string_view s) {
  if (s == "plain") return Flavor::Plain;
  if (s == "tangent") return Flavor::Tangent;
  if (s == "cotangent") return Flavor::Cotangent;
  throw DimensionError("unknown chart flavor '" + std::string(s) + "'");
}

Box Box::cube(std::size_t dim, double lo, double hi) {
  return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  }
  return true;
}

Chart::Chart(std::vector<std::string> names, Flavor flavor)
    : Chart(names, flavor, Box::cube(names.size(), -2.0, 2.0)) {}

Chart::Chart(std::vector<std::string> names, Flavor flavor, Box box)
    : names_(std::move(names)), flavor_(flavor), box_(std::move(box)) {
  if (names_.empty()) throw DimensionError("chart dimension must be positive");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw DimensionError("empty coordinate name");
    if (!seen.insert(n).second) throw DimensionError("duplicate coordinate name '" + n + "'");
    if (is_function_name(n)) throw DimensionError("coordinate name '" + n + "' shadows a function");
  }
  if (flavor_ != Flavor::Plain && names_.size() % 2 != 0) {
    throw DimensionError(std::string(to_string(flavor_)) + " chart requires even dimension");
  }
  if (box_.lo.size() != names_.size() || box_.hi.size() != names_.size()) {
    throw DimensionError("box dimension does not match chart dimension");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!(box_.lo[i] < box_.hi[i])) throw DimensionError("empty box along '" + names_[i] + "'");
  }
}

Chart Chart::with_box(Box box) const { return Chart(names_, flavor_, std::move(box)); }

std::size_t Chart::base_dim() const { return flavor_ == Flavor::Plain ? dim() : dim() / 2; }

Chart Chart::base() const {
  const std::size_t n = base_dim();
  std::vector<std::string> names(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(n));
  Box b{std::vector<double>(box_.lo.begin(), box_.lo.begin() + static_cast<std::ptrdiff_t>(n)),
        std::vector<double>(box_.hi.begin(), box_.hi.begin() + static_cast<std::ptrdiff_t>(n))};
  return Chart(std::move(names), Flavor::Plain, std::move(b));
}

Expr Chart::coord(std::size_t i) const {
  if (i >= dim()) throw DimensionError("coordinate index out of range");
  return Expr::var(i);
}

Expr Chart::coord(std::string_view name) const { return Expr::var(index_of(name)); }

std::size_t Chart::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw DimensionError("no coordinate named '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

Expr Chart::parse(std::string_view text) const { return gm::parse(text, names_); }

void require_on_chart(const Expr& e, const Chart& chart, std::string_view what) {
  if (e.arity() > chart.dim()) {
    throw DimensionError(std::string(what) + " references coordinate " + std::to_string(e.arity() - 1) +
                         " on a chart of dimension " + std::to_string(chart.dim()));
  }
}

void require_same_chart(const Chart& a, const Chart& b, std::string_view op) {
  if (!(a == b)) throw DimensionError(std::string(op) + ": chart mismatch");
}

}  // namespace gm
