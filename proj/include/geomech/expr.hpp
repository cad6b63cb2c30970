#pragma once

// Expression trees over chart coordinates: parsing, printing, exact symbolic
// differentiation, light simplification and numeric evaluation.
//
// An Expr is an immutable handle to a shared node graph. Copying is cheap and
// sharing across threads is safe.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gm {

enum class Op : unsigned char {
  Const,
  Var,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sin,
  Cos,
  Tan,
  Exp,
  Log,
  Sqrt,
  Asin,
  Acos,
  Atan,
  Extern,
};

class Expr;
struct ExternFunction;

using PointFunction = std::function<double(std::span<const double>)>;

/// Default central finite-difference step for procedural scalars.
inline constexpr double kDefaultFdStep = 1e-6;

struct Node;

class Expr {
 public:
  /// The constant zero.
  Expr();
  Expr(double value);  // NOLINT: implicit constants read naturally in formulas

  static Expr constant(double value);
  static Expr var(std::size_t index);

  /// Procedural scalar. `partials`, when non-empty, must hold one exact
  /// partial derivative per coordinate; otherwise differentiation falls back
  /// to central finite differences with `fd_step`.
  static Expr external(std::string name, PointFunction fn, std::vector<Expr> partials = {},
                       double fd_step = kDefaultFdStep);

  Op op() const noexcept;
  double value() const;       // Const only
  std::size_t index() const;  // Var only
  const Expr& lhs() const;    // unary / binary operand
  const Expr& rhs() const;    // binary operand
  const ExternFunction& external_function() const;

  bool is_const() const noexcept { return op() == Op::Const; }
  bool is_const(double v) const noexcept;
  bool is_symbolic() const noexcept;  // no Extern node anywhere

  /// One past the largest coordinate index referenced, 0 for closed terms.
  /// Procedural nodes report 0: they accept any point.
  std::size_t arity() const noexcept;

  double eval(std::span<const double> x) const;

  /// Structural identity (same tree shape, constants equal bitwise).
  bool same_as(const Expr& other) const noexcept;

  std::string str() const;
  std::string str(std::span<const std::string> names) const;

  const Node* node() const noexcept { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend Expr make_node(Op, Expr, Expr);
  friend struct Node;
};

struct ExternFunction {
  std::string name;
  PointFunction fn;
  std::vector<Expr> partials;
  double fd_step = kDefaultFdStep;
};

// Smart constructors. They fold constants and apply 0/1 identities so that
// derivative trees stay small.
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Expr& exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);
Expr asin(const Expr& a);
Expr acos(const Expr& a);
Expr atan(const Expr& a);

/// Exact partial derivative with respect to coordinate `i`.
Expr diff(const Expr& e, std::size_t i);

/// Best-effort simplification; never changes values.
Expr simplify(const Expr& e);

/// Replace every coordinate reference Var(k) by `values[k]`.
Expr substitute(const Expr& e, std::span<const Expr> values);

/// Sum of a list (0 for empty).
Expr sum(std::span<const Expr> terms);

struct ParseOptions {
  /// Extra named subexpressions that may be referenced by identifier.
  const std::map<std::string, Expr, std::less<>>* symbols = nullptr;
};

/// Parse `text` against the coordinate names of a chart.
///
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := unary ("^" factor)?
///   unary  := "-" unary | atom
///   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
///
/// `pow(a, b)` is accepted as a two-argument spelling of `a^b`.
Expr parse(std::string_view text, std::span<const std::string> names, const ParseOptions& opts = {});

bool is_function_name(std::string_view name);

}  // namespace gm
