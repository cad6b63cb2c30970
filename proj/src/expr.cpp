#include "geomech/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <utility>

#include "geomech/error.hpp"

namespace gm {

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  std::size_t index = 0;
  Expr a;
  Expr b;
  std::shared_ptr<const ExternFunction> ext;
  std::size_t arity = 0;
  bool symbolic = true;

  // Children start out null so that building the shared zero constant does
  // not recurse into Expr's default constructor.
  Node() : a(nullptr_expr()), b(nullptr_expr()) {}

  static Expr nullptr_expr() { return Expr(std::shared_ptr<const Node>{}); }
};

namespace {

std::shared_ptr<const Node> make_const_node(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v == 0.0 ? 0.0 : v;  // no negative zero
  return n;
}

const std::shared_ptr<const Node>& zero_node() {
  static const std::shared_ptr<const Node> zero = make_const_node(0.0);
  return zero;
}

bool is_unary(Op op) {
  switch (op) {
    case Op::Neg:
    case Op::Sin:
    case Op::Cos:
    case Op::Tan:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt:
    case Op::Asin:
    case Op::Acos:
    case Op::Atan:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Pow;
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Asin: return "asin";
    case Op::Acos: return "acos";
    case Op::Atan: return "atan";
    default: return nullptr;
  }
}

struct FunctionEntry {
  const char* name;
  Op op;
};

constexpr FunctionEntry kFunctions[] = {
    {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan},   {"exp", Op::Exp},   {"log", Op::Log},
    {"sqrt", Op::Sqrt}, {"asin", Op::Asin}, {"acos", Op::Acos}, {"atan", Op::Atan},
};

bool lookup_function(std::string_view name, Op& op) {
  for (const auto& f : kFunctions) {
    if (name == f.name) {
      op = f.op;
      return true;
    }
  }
  return false;
}

double apply_unary(Op op, double v) {
  switch (op) {
    case Op::Neg: return -v;
    case Op::Sin: return std::sin(v);
    case Op::Cos: return std::cos(v);
    case Op::Tan: return std::tan(v);
    case Op::Exp: return std::exp(v);
    case Op::Log: return std::log(v);
    case Op::Sqrt: return std::sqrt(v);
    case Op::Asin: return std::asin(v);
    case Op::Acos: return std::acos(v);
    case Op::Atan: return std::atan(v);
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

double apply_binary(Op op, double x, double y) {
  switch (op) {
    case Op::Add: return x + y;
    case Op::Sub: return x - y;
    case Op::Mul: return x * y;
    case Op::Div: return x / y;
    case Op::Pow: return std::pow(x, y);
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

// Domain checks shared by evaluation and constant folding; nullptr means the
// operation is admissible.
const char* unary_domain_violation(Op op, double v) {
  switch (op) {
    case Op::Log:
      return v > 0.0 ? nullptr : "log of nonpositive value";
    case Op::Sqrt:
      return v >= 0.0 ? nullptr : "sqrt of negative value";
    case Op::Asin:
    case Op::Acos:
      return (v >= -1.0 && v <= 1.0) ? nullptr : "inverse trig argument outside [-1,1]";
    case Op::Tan:
      return std::cos(v) != 0.0 ? nullptr : "tan at a pole";
    default:
      return nullptr;
  }
}

const char* binary_domain_violation(Op op, double x, double y) {
  if (op == Op::Div && y == 0.0) return "division by zero";
  if (op == Op::Pow) {
    if (x < 0.0 && std::floor(y) != y) return "negative base with non-integer exponent";
    if (x == 0.0 && y < 0.0) return "zero raised to a negative power";
  }
  return nullptr;
}

}  // namespace

Expr make_node(Op op, Expr a, Expr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->symbolic = a.is_symbolic() && (b.node() == nullptr || b.is_symbolic());
  n->arity = std::max(a.arity(), b.node() == nullptr ? std::size_t{0} : b.arity());
  n->a = std::move(a);
  n->b = std::move(b);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

namespace {

Expr unary_node(Op op, const Expr& a) { return make_node(op, a, Node::nullptr_expr()); }

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(double value) : node_(value == 0.0 && !std::signbit(value) ? zero_node() : make_const_node(value)) {}

Expr Expr::constant(double value) { return Expr(value); }

Expr Expr::var(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = index;
  n->arity = index + 1;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::external(std::string name, PointFunction fn, std::vector<Expr> partials, double fd_step) {
  auto f = std::make_shared<ExternFunction>();
  f->name = std::move(name);
  f->fn = std::move(fn);
  f->partials = std::move(partials);
  f->fd_step = fd_step;
  auto n = std::make_shared<Node>();
  n->op = Op::Extern;
  n->ext = std::move(f);
  n->symbolic = false;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const { return node_->value; }
std::size_t Expr::index() const { return node_->index; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
const ExternFunction& Expr::external_function() const { return *node_->ext; }
bool Expr::is_const(double v) const noexcept { return node_->op == Op::Const && node_->value == v; }
bool Expr::is_symbolic() const noexcept { return node_->symbolic; }
std::size_t Expr::arity() const noexcept { return node_->arity; }

double Expr::eval(std::span<const double> x) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var:
      if (n.index >= x.size()) {
        throw DimensionError("coordinate index " + std::to_string(n.index) + " outside point of dimension " +
                             std::to_string(x.size()));
      }
      return x[n.index];
    case Op::Extern:
      return n.ext->fn(x);
    default:
      break;
  }
  if (is_unary(n.op)) {
    const double v = n.a.eval(x);
    if (const char* why = unary_domain_violation(n.op, v)) throw DomainError(why, str());
    return apply_unary(n.op, v);
  }
  const double l = n.a.eval(x);
  const double r = n.b.eval(x);
  if (const char* why = binary_domain_violation(n.op, l, r)) throw DomainError(why, str());
  return apply_binary(n.op, l, r);
}

bool Expr::same_as(const Expr& other) const noexcept {
  if (node_ == other.node_) return true;
  const Node& p = *node_;
  const Node& q = *other.node_;
  if (p.op != q.op) return false;
  switch (p.op) {
    case Op::Const:
      return p.value == q.value;
    case Op::Var:
      return p.index == q.index;
    case Op::Extern:
      return p.ext == q.ext;
    default:
      break;
  }
  if (!p.a.same_as(q.a)) return false;
  return is_unary(p.op) || p.b.same_as(q.b);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Grammar contexts, from loosest to tightest.
enum class Ctx { Expr, Term, Factor, Unary };

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool fits(const Expr& e, Ctx ctx) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return ctx == Ctx::Expr;
    case Op::Mul:
    case Op::Div:
      return ctx == Ctx::Expr || ctx == Ctx::Term;
    case Op::Pow:
      return ctx != Ctx::Unary;
    default:
      return true;
  }
}

void print(const Expr& e, std::span<const std::string> names, Ctx ctx, std::string& out) {
  if (!fits(e, ctx)) {
    out += '(';
    print(e, names, Ctx::Expr, out);
    out += ')';
    return;
  }
  switch (e.op()) {
    case Op::Const:
      out += format_number(e.value());
      return;
    case Op::Var:
      if (e.index() < names.size()) {
        out += names[e.index()];
      } else {
        out += "x" + std::to_string(e.index());
      }
      return;
    case Op::Extern:
      out += '<' + e.external_function().name + '>';
      return;
    case Op::Neg:
      out += '-';
      print(e.lhs(), names, Ctx::Unary, out);
      return;
    case Op::Add:
    case Op::Sub:
      print(e.lhs(), names, Ctx::Expr, out);
      out += e.op() == Op::Add ? " + " : " - ";
      print(e.rhs(), names, Ctx::Term, out);
      return;
    case Op::Mul:
    case Op::Div:
      print(e.lhs(), names, Ctx::Term, out);
      out += e.op() == Op::Mul ? '*' : '/';
      print(e.rhs(), names, Ctx::Factor, out);
      return;
    case Op::Pow:
      print(e.lhs(), names, Ctx::Unary, out);
      out += '^';
      print(e.rhs(), names, Ctx::Factor, out);
      return;
    default:
      out += function_name(e.op());
      out += '(';
      print(e.lhs(), names, Ctx::Expr, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string Expr::str() const { return str({}); }

std::string Expr::str(std::span<const std::string> names) const {
  std::string out;
  print(*this, names, Ctx::Expr, out);
  return out;
}

// ---------------------------------------------------------------------------
// Smart constructors

namespace {

bool foldable(double v) { return std::isfinite(v); }

Expr fold_unary(Op op, const Expr& a) {
  if (a.is_const()) {
    const double v = a.value();
    if (unary_domain_violation(op, v) == nullptr) {
      const double r = apply_unary(op, v);
      if (foldable(r)) return Expr(r);
    }
  }
  return unary_node(op, a);
}

}  // namespace

Expr operator-(const Expr& a) {
  if (a.is_const()) return Expr(-a.value());
  if (a.op() == Op::Neg) return a.lhs();
  return unary_node(Op::Neg, a);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() + b.value());
  if (a.is_const(0.0)) return b;
  if (b.is_const(0.0)) return a;
  if (b.op() == Op::Neg) return a - b.lhs();
  if (b.is_const() && b.value() < 0.0) return make_node(Op::Sub, a, Expr(-b.value()));
  if (a.op() == Op::Neg) return b - a.lhs();
  return make_node(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() - b.value());
  if (b.is_const(0.0)) return a;
  if (a.is_const(0.0)) return -b;
  if (a.same_as(b)) return Expr(0.0);
  if (b.op() == Op::Neg) return a + b.lhs();
  if (b.is_const() && b.value() < 0.0) return make_node(Op::Add, a, Expr(-b.value()));
  return make_node(Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() * b.value());
  if (a.is_const(0.0) || b.is_const(0.0)) return Expr(0.0);
  if (a.is_const(1.0)) return b;
  if (b.is_const(1.0)) return a;
  if (a.is_const(-1.0)) return -b;
  if (b.is_const(-1.0)) return -a;
  if (b.is_const()) return b * a;
  if (a.op() == Op::Neg) return -(a.lhs() * b);
  if (b.op() == Op::Neg) return -(a * b.lhs());
  if (a.is_const() && b.op() == Op::Mul && b.lhs().is_const()) return Expr(a.value() * b.lhs().value()) * b.rhs();
  return make_node(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const() && b.value() != 0.0) return Expr(a.value() / b.value());
  if (a.is_const(0.0) && b.is_const() && b.value() != 0.0) return Expr(0.0);
  if (b.is_const(1.0)) return a;
  if (b.is_const(-1.0)) return -a;
  if (a.same_as(b) && a.is_symbolic()) return Expr(1.0);
  if (a.op() == Op::Neg) return -(a.lhs() / b);
  return make_node(Op::Div, a, b);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_const(0.0)) return Expr(1.0);
  if (exponent.is_const(1.0)) return base;
  if (base.is_const(1.0)) return Expr(1.0);
  if (base.is_const() && exponent.is_const()) {
    const double x = base.value();
    const double y = exponent.value();
    if (binary_domain_violation(Op::Pow, x, y) == nullptr) {
      const double r = std::pow(x, y);
      if (foldable(r)) return Expr(r);
    }
  }
  if (base.op() == Op::Pow && base.rhs().is_const() && exponent.is_const()) {
    const double inner = base.rhs().value();
    const double outer = exponent.value();
    // (a^m)^k = a^(mk) for integer m, k keeps sign behaviour intact.
    if (std::floor(inner) == inner && std::floor(outer) == outer) return pow(base.lhs(), Expr(inner * outer));
  }
  return make_node(Op::Pow, base, exponent);
}

Expr sin(const Expr& a) { return fold_unary(Op::Sin, a); }
Expr cos(const Expr& a) { return fold_unary(Op::Cos, a); }
Expr tan(const Expr& a) { return fold_unary(Op::Tan, a); }
Expr exp(const Expr& a) { return fold_unary(Op::Exp, a); }
Expr log(const Expr& a) { return fold_unary(Op::Log, a); }
Expr sqrt(const Expr& a) { return fold_unary(Op::Sqrt, a); }
Expr asin(const Expr& a) { return fold_unary(Op::Asin, a); }
Expr acos(const Expr& a) { return fold_unary(Op::Acos, a); }
Expr atan(const Expr& a) { return fold_unary(Op::Atan, a); }

Expr sum(std::span<const Expr> terms) {
  Expr acc;
  for (const auto& t : terms) acc = acc + t;
  return acc;
}

namespace {

Expr rebuild(Op op, const Expr& a, const Expr& b) {
  switch (op) {
    case Op::Neg: return -a;
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Pow: return pow(a, b);
    default: return fold_unary(op, a);
  }
}

Expr finite_difference_extern(const std::shared_ptr<const ExternFunction>& parent, std::size_t i) {
  const double h = parent->fd_step;
  auto fn = [parent, i, h](std::span<const double> x) {
    if (i >= x.size()) throw DimensionError("finite difference index outside point dimension");
    std::vector<double> p(x.begin(), x.end());
    p[i] = x[i] + h;
    const double fp = parent->fn(p);
    p[i] = x[i] - h;
    const double fm = parent->fn(p);
    return (fp - fm) / (2.0 * h);
  };
  return Expr::external("d" + std::to_string(i) + "(" + parent->name + ")", std::move(fn), {}, h);
}

}  // namespace

Expr diff(const Expr& e, std::size_t i) {
  switch (e.op()) {
    case Op::Const:
      return Expr(0.0);
    case Op::Var:
      return Expr(e.index() == i ? 1.0 : 0.0);
    case Op::Extern: {
      const auto& f = e.external_function();
      if (!f.partials.empty()) {
        if (i >= f.partials.size()) return Expr(0.0);
        return f.partials[i];
      }
      return finite_difference_extern(e.node()->ext, i);
    }
    default:
      break;
  }
  const Expr& a = e.lhs();
  if (a.is_symbolic() && a.arity() <= i && (!is_binary(e.op()) || (e.rhs().is_symbolic() && e.rhs().arity() <= i))) {
    return Expr(0.0);
  }
  switch (e.op()) {
    case Op::Neg:
      return -diff(a, i);
    case Op::Add:
      return diff(a, i) + diff(e.rhs(), i);
    case Op::Sub:
      return diff(a, i) - diff(e.rhs(), i);
    case Op::Mul:
      return diff(a, i) * e.rhs() + a * diff(e.rhs(), i);
    case Op::Div: {
      const Expr& b = e.rhs();
      const Expr da = diff(a, i);
      const Expr db = diff(b, i);
      if (db.is_const(0.0)) return da / b;
      return (da * b - a * db) / pow(b, Expr(2.0));
    }
    case Op::Pow: {
      const Expr& b = e.rhs();
      const Expr da = diff(a, i);
      const Expr db = diff(b, i);
      if (db.is_const(0.0)) {
        if (b.is_const()) return b * pow(a, Expr(b.value() - 1.0)) * da;
        return b * pow(a, b - Expr(1.0)) * da;
      }
      if (da.is_const(0.0)) return e * log(a) * db;
      return e * (db * log(a) + b * da / a);
    }
    case Op::Sin:
      return cos(a) * diff(a, i);
    case Op::Cos:
      return -(sin(a) * diff(a, i));
    case Op::Tan:
      return diff(a, i) / pow(cos(a), Expr(2.0));
    case Op::Exp:
      return e * diff(a, i);
    case Op::Log:
      return diff(a, i) / a;
    case Op::Sqrt:
      return diff(a, i) / (Expr(2.0) * e);
    case Op::Asin:
      return diff(a, i) / sqrt(Expr(1.0) - pow(a, Expr(2.0)));
    case Op::Acos:
      return -(diff(a, i) / sqrt(Expr(1.0) - pow(a, Expr(2.0))));
    case Op::Atan:
      return diff(a, i) / (Expr(1.0) + pow(a, Expr(2.0)));
    default:
      return Expr(0.0);
  }
}

Expr simplify(const Expr& e) {
  switch (e.op()) {
    case Op::Const:
    case Op::Var:
    case Op::Extern:
      return e;
    default:
      break;
  }
  const Expr a = simplify(e.lhs());
  if (is_unary(e.op())) return rebuild(e.op(), a, Expr());
  return rebuild(e.op(), a, simplify(e.rhs()));
}

Expr substitute(const Expr& e, std::span<const Expr> values) {
  switch (e.op()) {
    case Op::Const:
      return e;
    case Op::Var:
      if (e.index() >= values.size()) {
        throw DimensionError("substitution does not cover coordinate " + std::to_string(e.index()));
      }
      return values[e.index()];
    case Op::Extern: {
      auto parent = e.node()->ext;
      std::vector<Expr> vals(values.begin(), values.end());
      auto fn = [parent, vals](std::span<const double> x) {
        std::vector<double> mapped(vals.size());
        for (std::size_t k = 0; k < vals.size(); ++k) mapped[k] = vals[k].eval(x);
        return parent->fn(mapped);
      };
      return Expr::external(parent->name + "*", std::move(fn), {}, parent->fd_step);
    }
    default:
      break;
  }
  const Expr a = substitute(e.lhs(), values);
  if (is_unary(e.op())) return rebuild(e.op(), a, Expr());
  return rebuild(e.op(), a, substitute(e.rhs(), values));
}

// ---------------------------------------------------------------------------
// Parser

bool is_function_name(std::string_view name) {
  Op op{};
  return lookup_function(name, op) || name == "pow";
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> names, const ParseOptions& opts)
      : text_(text), names_(names), opts_(opts) {}

  Expr run() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    Expr acc = term();
    for (;;) {
      if (accept('+')) {
        acc = make_node(Op::Add, acc, term());
      } else if (accept('-')) {
        acc = make_node(Op::Sub, acc, term());
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = factor();
    for (;;) {
      if (accept('*')) {
        acc = make_node(Op::Mul, acc, factor());
      } else if (accept('/')) {
        acc = make_node(Op::Div, acc, factor());
      } else {
        return acc;
      }
    }
  }

  Expr factor() {
    Expr base = unary();
    if (accept('^')) return make_node(Op::Pow, base, factor());
    return base;
  }

  Expr unary() {
    if (accept('-')) return unary_node(Op::Neg, unary());
    return atom();
  }

  Expr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      Expr inner = expr();
      expect(')');
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    skip_space();
    const bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (call) {
      Op op{};
      if (lookup_function(name, op)) {
        expect('(');
        Expr arg = expr();
        expect(')');
        return unary_node(op, arg);
      }
      if (name == "pow") {
        expect('(');
        Expr base = expr();
        expect(',');
        Expr exponent = expr();
        expect(')');
        return make_node(Op::Pow, base, exponent);
      }
    }
    for (std::size_t k = 0; k < names_.size(); ++k) {
      if (names_[k] == name) return Expr::var(k);
    }
    if (opts_.symbols != nullptr) {
      auto it = opts_.symbols->find(name);
      if (it != opts_.symbols->end()) return it->second;
    }
    if (call) throw UnknownIdentifier(std::string(name) + "' (not a supported function", start);
    throw UnknownIdentifier(std::string(name), start);
  }

  std::string_view text_;
  std::span<const std::string> names_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::span<const std::string> names, const ParseOptions& opts) {
  return Parser(text, names, opts).run();
}

}  // namespace gm
