#include <cmath>
#include <unordered_map>

#include "formcalc/expr.hpp"
#include "kernels.hpp"

namespace formcalc {
namespace {

bool is_zero(const Expr& e) { return e.is_constant() && e.value() == 0.0; }

// Folded constants never carry a negative zero.
Expr folded(double v) { return Expr::constant(v == 0.0 ? 0.0 : v); }

std::optional<Expr> fold(Op op, double a, double b) {
  double v = detail::apply_binary(op, a, b);
  if (!std::isfinite(v)) return std::nullopt;
  return folded(v);
}

Expr rewrite_add(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) {
    if (auto c = fold(Op::Add, a.value(), b.value())) return *c;
  }
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (b.op() == Op::Neg) return a - b.child();
  if (a.op() == Op::Neg) return b - a.child();
  if (b.is_constant() && b.value() < 0.0) return a - Expr::constant(-b.value());
  return a + b;
}

Expr rewrite_sub(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) {
    if (auto c = fold(Op::Sub, a.value(), b.value())) return *c;
  }
  if (is_zero(b)) return a;
  if (is_zero(a)) return -b;
  if (a == b) return Expr::constant(0.0);
  if (b.op() == Op::Neg) return a + b.child();
  if (b.is_constant() && b.value() < 0.0) return a + Expr::constant(-b.value());
  return a - b;
}

Expr rewrite_mul(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) {
    if (auto c = fold(Op::Mul, a.value(), b.value())) return *c;
  }
  if (is_zero(a) || is_zero(b)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  // Constants go to the left so that chains of them can merge.
  if (b.is_constant() && !a.is_constant()) return b * a;
  if (a.is_constant() && b.op() == Op::Mul && b.lhs().is_constant()) {
    if (auto c = fold(Op::Mul, a.value(), b.lhs().value())) return *c * b.rhs();
  }
  if (a.op() == Op::Neg && b.op() == Op::Neg) return a.child() * b.child();
  if (a.op() == Op::Neg) return -(a.child() * b);
  if (b.op() == Op::Neg) return -(a * b.child());
  return a * b;
}

Expr rewrite_div(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) {
    if (auto c = fold(Op::Div, a.value(), b.value())) return *c;
  }
  if (is_zero(a)) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  if (b.is_constant(-1.0)) return -a;
  if (a == b) return Expr::constant(1.0);
  if (a.op() == Op::Neg) return -(a.child() / b);
  if (b.op() == Op::Neg) return -(a / b.child());
  // (c*p)/(c*q) -> p/q and (c*p)/c -> p
  if (a.op() == Op::Mul && a.lhs().is_constant()) {
    if (b.op() == Op::Mul && b.lhs() == a.lhs()) return a.rhs() / b.rhs();
    if (b == a.lhs()) return a.rhs();
  }
  return a / b;
}

Expr rewrite_neg(const Expr& a) {
  if (a.is_constant()) return folded(-a.value());
  if (a.op() == Op::Neg) return a.child();
  if (a.op() == Op::Sub) return a.rhs() - a.lhs();
  return -a;
}

Expr rewrite_pow(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) {
    if (auto c = fold(Op::Pow, a.value(), b.value())) return *c;
  }
  if (b.is_constant(1.0)) return a;
  if (b.is_constant(0.0) || a.is_constant(1.0)) return Expr::constant(1.0);
  return pow(a, b);
}

class Pass {
 public:
  // Returns the same node (pointer-equal) when nothing changed.
  Expr run(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr out = step(e);
    memo_.emplace(e.id(), out);
    return out;
  }

 private:
  Expr step(const Expr& e) {
    switch (e.op()) {
      case Op::Constant:
      case Op::Variable: return e;
      case Op::Neg: {
        Expr c = run(e.child());
        Expr r = rewrite_neg(c);
        return keep_if_same(e, r);
      }
      case Op::Call: {
        Expr c = run(e.child());
        if (c.is_constant()) {
          double v = detail::apply_call(e.func(), c.value());
          if (std::isfinite(v)) return folded(v);
        }
        return c.id() == e.child().id() ? e : Expr::call(e.func(), c);
      }
      default: break;
    }
    Expr l = run(e.lhs());
    Expr r = run(e.rhs());
    Expr out;
    switch (e.op()) {
      case Op::Add: out = rewrite_add(l, r); break;
      case Op::Sub: out = rewrite_sub(l, r); break;
      case Op::Mul: out = rewrite_mul(l, r); break;
      case Op::Div: out = rewrite_div(l, r); break;
      case Op::Pow: out = rewrite_pow(l, r); break;
      default: return e;
    }
    return keep_if_same(e, out);
  }

  // Rules rebuild nodes unconditionally; map a structurally identical result
  // back to the input so the fixpoint loop can detect convergence by pointer.
  static Expr keep_if_same(const Expr& before, const Expr& after) {
    if (after.op() != before.op()) return after;
    if (after.arity() == 1 && after.child().id() == before.child().id()) return before;
    if (after.arity() == 2 && after.lhs().id() == before.lhs().id() &&
        after.rhs().id() == before.rhs().id()) {
      return before;
    }
    return after;
  }

  std::unordered_map<const void*, Expr> memo_;
};

}  // namespace

Expr simplify(const Expr& e) {
  Expr current = e;
  for (int i = 0; i < 64; ++i) {
    Expr next = Pass{}.run(current);
    if (next.id() == current.id()) return current;
    current = next;
  }
  return current;
}

}  // namespace formcalc
