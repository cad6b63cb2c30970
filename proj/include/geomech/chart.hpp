#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "geomech/expr.hpp"

namespace gm {

using Point = std::vector<double>;

enum class Flavor {
  Plain,
  Tangent,    // (q^1..q^n, v^1..v^n)
  Cotangent,  // (q^1..q^n, p_1..p_n)
};

std::string_view to_string(Flavor f);
Flavor flavor_from_string(std::string_view s);

/// Axis-aligned working region of a chart.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(std::size_t dim, double lo, double hi);
  bool contains(std::span<const double> x) const;
  std::size_t dim() const { return lo.size(); }
};

/// A single global coordinate chart (an open box of R^n).
class Chart {
 public:
  Chart() = default;
  explicit Chart(std::vector<std::string> names, Flavor flavor = Flavor::Plain);
  Chart(std::vector<std::string> names, Flavor flavor, Box box);

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  Flavor flavor() const { return flavor_; }
  const Box& box() const { return box_; }

  Chart with_box(Box box) const;

  /// Number of base coordinates: n/2 for bundle flavors, n otherwise.
  std::size_t base_dim() const;
  /// Plain chart on the first base_dim() coordinates, box restricted likewise.
  Chart base() const;

  Expr coord(std::size_t i) const;
  Expr coord(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;

  Expr parse(std::string_view text) const;

  /// Charts are compatible when names and flavor agree; boxes may differ.
  bool operator==(const Chart& other) const { return names_ == other.names_ && flavor_ == other.flavor_; }

 private:
  std::vector<std::string> names_;
  Flavor flavor_ = Flavor::Plain;
  Box box_;
};

/// Validate that every coordinate referenced by `e` exists on `chart`.
void require_on_chart(const Expr& e, const Chart& chart, std::string_view what);
void require_same_chart(const Chart& a, const Chart& b, std::string_view op);

}  // namespace gm
