#pragma once

#include <cmath>

#include "formcalc/expr.hpp"

namespace formcalc::detail {

// Shared by the tree-walking evaluator and compiled programs so both produce
// identical bits.

// x*x is the correctly rounded square, so this agrees with pow(x, 2).
inline double power(double a, double b) { return b == 2.0 ? a * a : std::pow(a, b); }

inline double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Pow: return power(a, b);
    default: return std::nan("");
  }
}

inline double apply_call(Func f, double a) {
  switch (f) {
    case Func::Sqrt: return std::sqrt(a);
    case Func::Sin: return std::sin(a);
    case Func::Cos: return std::cos(a);
    case Func::Tan: return std::tan(a);
    case Func::Exp: return std::exp(a);
    case Func::Ln: return std::log(a);
  }
  return std::nan("");
}

}  // namespace formcalc::detail
