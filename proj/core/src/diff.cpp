#include <unordered_map>

#include "formcalc/expr.hpp"

namespace formcalc {
namespace {

class Differentiator {
 public:
  explicit Differentiator(std::string_view var) : var_(var) {}

  Expr d(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr out = rule(e);
    memo_.emplace(e.id(), out);
    return out;
  }

 private:
  static Expr k(double v) { return Expr::constant(v); }

  Expr rule(const Expr& e) {
    if (!depends_on(e, var_)) return k(0.0);
    switch (e.op()) {
      case Op::Constant: return k(0.0);
      case Op::Variable: return k(e.name() == var_ ? 1.0 : 0.0);
      case Op::Add: return d(e.lhs()) + d(e.rhs());
      case Op::Sub: return d(e.lhs()) - d(e.rhs());
      case Op::Neg: return -d(e.child());
      case Op::Mul: return d(e.lhs()) * e.rhs() + e.lhs() * d(e.rhs());
      case Op::Div: {
        const Expr& u = e.lhs();
        const Expr& v = e.rhs();
        return (d(u) * v - u * d(v)) / pow(v, k(2.0));
      }
      case Op::Pow: return power_rule(e.lhs(), e.rhs(), e);
      case Op::Call: return call_rule(e);
    }
    return k(0.0);
  }

  Expr power_rule(const Expr& base, const Expr& expo, const Expr& whole) {
    if (!depends_on(expo, var_)) {
      if (expo.is_constant()) {
        return k(expo.value()) * pow(base, k(expo.value() - 1.0)) * d(base);
      }
      return expo * pow(base, expo - k(1.0)) * d(base);
    }
    if (!depends_on(base, var_)) return whole * ln(base) * d(expo);
    return whole * (d(expo) * ln(base) + expo * d(base) / base);
  }

  Expr call_rule(const Expr& e) {
    const Expr& u = e.child();
    Expr du = d(u);
    switch (e.func()) {
      case Func::Sqrt: return du / (k(2.0) * e);
      case Func::Sin: return cos(u) * du;
      case Func::Cos: return -(sin(u) * du);
      case Func::Tan: return du / pow(cos(u), k(2.0));
      case Func::Exp: return e * du;
      case Func::Ln: return du / u;
    }
    return k(0.0);
  }

  std::string_view var_;
  std::unordered_map<const void*, Expr> memo_;
};

}  // namespace

Expr diff(const Expr& e, std::string_view var) {
  return simplify(Differentiator(var).d(e));
}

}  // namespace formcalc
