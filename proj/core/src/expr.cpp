#include "formcalc/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "formcalc/error.hpp"
#include "kernels.hpp"

namespace formcalc {

ParseError::ParseError(std::string message, std::size_t offset,
                       std::vector<std::string> expected)
    : Error(std::move(message)), offset_(offset), expected_(std::move(expected)) {}

struct Expr::Node {
  Op op = Op::Constant;
  double value = 0.0;
  std::string name;
  Func func = Func::Sqrt;
  Expr a{nullptr};
  Expr b{nullptr};
};

namespace {

constexpr std::array<std::pair<Func, std::string_view>, 6> kFuncNames{{
    {Func::Sqrt, "sqrt"},
    {Func::Sin, "sin"},
    {Func::Cos, "cos"},
    {Func::Tan, "tan"},
    {Func::Exp, "exp"},
    {Func::Ln, "ln"},
}};

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!alpha(s.front())) return false;
  for (char c : s) {
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

}  // namespace

std::string_view func_name(Func f) {
  for (auto [fn, name] : kFuncNames) {
    if (fn == f) return name;
  }
  return "?";
}

std::optional<Func> func_from_name(std::string_view name) {
  for (auto [fn, n] : kFuncNames) {
    if (n == name) return fn;
  }
  return std::nullopt;
}

bool is_reserved_name(std::string_view name) {
  return name == "pi" || func_from_name(name).has_value();
}

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
  if (!std::isfinite(value)) {
    throw DomainError("expression constants must be finite");
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  if (!is_identifier(name)) {
    throw DomainError("invalid variable name '" + name + "'");
  }
  if (is_reserved_name(name)) {
    throw DomainError("'" + name + "' is reserved and cannot name a variable");
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr argument) {
  auto n = std::make_shared<Node>();
  n->op = Op::Call;
  n->func = f;
  n->a = std::move(argument);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::neg(Expr child) {
  auto n = std::make_shared<Node>();
  n->op = Op::Neg;
  n->a = std::move(child);
  return Expr(std::move(n));
}

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
const std::string& Expr::name() const noexcept { return node_->name; }
Func Expr::func() const noexcept { return node_->func; }
const Expr& Expr::lhs() const noexcept { return node_->a; }
const Expr& Expr::rhs() const noexcept { return node_->b; }

std::size_t Expr::arity() const noexcept {
  switch (op()) {
    case Op::Constant:
    case Op::Variable: return 0;
    case Op::Neg:
    case Op::Call: return 1;
    default: return 2;
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Constant:
      // Bitwise on purpose: 0.0 and -0.0 are distinct trees.
      return std::signbit(a.value()) == std::signbit(b.value()) &&
             a.value() == b.value();
    case Op::Variable: return a.name() == b.name();
    case Op::Call: return a.func() == b.func() && a.lhs() == b.lhs();
    case Op::Neg: return a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

Expr pow(const Expr& base, const Expr& exponent) {
  return Expr::binary(Op::Pow, base, exponent);
}
Expr sqrt(const Expr& e) { return Expr::call(Func::Sqrt, e); }
Expr sin(const Expr& e) { return Expr::call(Func::Sin, e); }
Expr cos(const Expr& e) { return Expr::call(Func::Cos, e); }
Expr tan(const Expr& e) { return Expr::call(Func::Tan, e); }
Expr exp(const Expr& e) { return Expr::call(Func::Exp, e); }
Expr ln(const Expr& e) { return Expr::call(Func::Ln, e); }

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Constant: return std::signbit(e.value()) ? 3 : 5;
    case Op::Variable:
    case Op::Call: return 5;
    case Op::Pow: return 4;
    case Op::Neg: return 3;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Add:
    case Op::Sub: return 1;
  }
  return 0;
}

std::string format_number(double v) {
  if (v == std::numbers::pi) return "pi";
  if (v == -std::numbers::pi) return "-pi";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void print(const Expr& e, int min_prec, std::string& out) {
  bool paren = precedence(e) < min_prec;
  if (paren) out += '(';
  switch (e.op()) {
    case Op::Constant: out += format_number(e.value()); break;
    case Op::Variable: out += e.name(); break;
    case Op::Call:
      out += func_name(e.func());
      out += '(';
      print(e.child(), 0, out);
      out += ')';
      break;
    case Op::Neg:
      out += '-';
      print(e.child(), 3, out);
      break;
    case Op::Pow:
      print(e.lhs(), 5, out);
      out += '^';
      print(e.rhs(), 3, out);
      break;
    case Op::Mul:
    case Op::Div:
      print(e.lhs(), 2, out);
      out += e.op() == Op::Mul ? '*' : '/';
      print(e.rhs(), 3, out);
      break;
    case Op::Add:
    case Op::Sub:
      print(e.lhs(), 1, out);
      out += e.op() == Op::Add ? " + " : " - ";
      print(e.rhs(), 2, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_node(const Expr& e, const Bindings& b) {
  double v = 0.0;
  switch (e.op()) {
    case Op::Constant: return e.value();
    case Op::Variable: {
      auto it = b.find(e.name());
      if (it == b.end()) {
        throw EvalError(EvalError::Kind::UnboundVariable, e.name(),
                        "unbound variable '" + e.name() + "'");
      }
      v = it->second;
      break;
    }
    case Op::Neg: v = -eval_node(e.child(), b); break;
    case Op::Call: v = detail::apply_call(e.func(), eval_node(e.child(), b)); break;
    default: {
      double l = eval_node(e.lhs(), b);
      double r = eval_node(e.rhs(), b);
      v = detail::apply_binary(e.op(), l, r);
    }
  }
  if (!std::isfinite(v)) {
    std::string sub = to_string(e);
    throw EvalError(EvalError::Kind::NonFinite, sub, "non-finite value in '" + sub + "'");
  }
  return v;
}

}  // namespace

double eval(const Expr& e, const Bindings& b) { return eval_node(e, b); }

// ---------------------------------------------------------------------------
// Structural utilities

Expr substitute(const Expr& e, std::string_view var, const Expr& replacement) {
  switch (e.op()) {
    case Op::Constant: return e;
    case Op::Variable: return e.name() == var ? replacement : e;
    case Op::Neg: {
      Expr c = substitute(e.child(), var, replacement);
      return c.id() == e.child().id() ? e : Expr::neg(c);
    }
    case Op::Call: {
      Expr c = substitute(e.child(), var, replacement);
      return c.id() == e.child().id() ? e : Expr::call(e.func(), c);
    }
    default: {
      Expr l = substitute(e.lhs(), var, replacement);
      Expr r = substitute(e.rhs(), var, replacement);
      if (l.id() == e.lhs().id() && r.id() == e.rhs().id()) return e;
      return Expr::binary(e.op(), l, r);
    }
  }
}

namespace {

void collect_vars(const Expr& e, std::set<std::string, std::less<>>& out) {
  switch (e.op()) {
    case Op::Constant: return;
    case Op::Variable: out.insert(e.name()); return;
    default:
      collect_vars(e.lhs(), out);
      if (e.arity() == 2) collect_vars(e.rhs(), out);
  }
}

void collect_subterms(const Expr& e, std::unordered_set<const void*>& seen,
                      std::vector<Expr>& out) {
  if (!seen.insert(e.id()).second) return;
  if (e.arity() >= 1) collect_subterms(e.lhs(), seen, out);
  if (e.arity() == 2) collect_subterms(e.rhs(), seen, out);
  out.push_back(e);
}

}  // namespace

std::set<std::string, std::less<>> free_variables(const Expr& e) {
  std::set<std::string, std::less<>> out;
  collect_vars(e, out);
  return out;
}

bool depends_on(const Expr& e, std::string_view var) {
  switch (e.op()) {
    case Op::Constant: return false;
    case Op::Variable: return e.name() == var;
    default:
      return depends_on(e.lhs(), var) || (e.arity() == 2 && depends_on(e.rhs(), var));
  }
}

std::vector<Expr> subterms(const Expr& e) {
  std::unordered_set<const void*> seen;
  std::vector<Expr> out;
  collect_subterms(e, seen, out);
  return out;
}

}  // namespace formcalc
