#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace formcalc {

enum class Op { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Call };

enum class Func { Sqrt, Sin, Cos, Tan, Exp, Ln };

std::string_view func_name(Func f);
std::optional<Func> func_from_name(std::string_view name);

/// True for identifiers that may not name a variable (function names, pi).
bool is_reserved_name(std::string_view name);

/// Immutable scalar expression over named real variables.
///
/// Nodes are shared, so copying an Expr is cheap and subtrees may appear in
/// several parents. Equality is structural.
class Expr {
 public:
  /// The constant 0.
  Expr();

  static Expr constant(double value);
  /// Throws DomainError for empty, malformed or reserved names.
  static Expr variable(std::string name);
  static Expr call(Func f, Expr argument);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr neg(Expr child);

  Op op() const noexcept;
  bool is_constant() const noexcept { return op() == Op::Constant; }
  bool is_constant(double v) const noexcept { return is_constant() && value() == v; }
  bool is_variable() const noexcept { return op() == Op::Variable; }

  /// Only meaningful for the matching node kind.
  double value() const noexcept;
  const std::string& name() const noexcept;
  Func func() const noexcept;

  /// Left operand of binary nodes; the single child of Neg and Call.
  const Expr& lhs() const noexcept;
  const Expr& rhs() const noexcept;
  const Expr& child() const noexcept { return lhs(); }

  std::size_t arity() const noexcept;

  /// Node identity, used to share work between equal pointers.
  const void* id() const noexcept { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Op::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Op::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Op::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(Op::Div, a, b); }
  friend Expr operator-(const Expr& a) { return neg(a); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr pow(const Expr& base, const Expr& exponent);
Expr sqrt(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr exp(const Expr& e);
Expr ln(const Expr& e);

/// Variable name to value.
using Bindings = std::map<std::string, double, std::less<>>;

/// Parses the expression grammar:
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | power
///   power := atom ('^' unary)?
///   atom  := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
/// `pi` is a named constant. Throws ParseError.
Expr parse_expr(std::string_view text);

/// Prints with the minimum parentheses needed to parse back to the same tree.
std::string to_string(const Expr& e);

/// Throws EvalError on an unbound variable or any non-finite intermediate.
double eval(const Expr& e, const Bindings& b);

/// Symbolic partial derivative, simplified.
Expr diff(const Expr& e, std::string_view var);

/// Constant folding plus identity elimination (+0, *0, *1, ^1, --a, a-a).
/// Value-preserving wherever the input is finite, and idempotent.
Expr simplify(const Expr& e);

/// Replaces every occurrence of `var` by `replacement`.
Expr substitute(const Expr& e, std::string_view var, const Expr& replacement);

std::set<std::string, std::less<>> free_variables(const Expr& e);
bool depends_on(const Expr& e, std::string_view var);

/// Every distinct subexpression, children before parents.
std::vector<Expr> subterms(const Expr& e);

}  // namespace formcalc
