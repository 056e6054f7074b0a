#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "formcalc/expr.hpp"

namespace formcalc {

/// An Expr flattened to straight-line code over a fixed argument order, with
/// common subexpressions shared. Evaluates one point or a whole batch of
/// points (one column per argument) and produces the same bits as eval().
///
/// Any non-finite intermediate throws EvalError naming the subexpression.
/// Programs are immutable; evaluation is thread-safe.
class Program {
 public:
  Program() = default;
  /// Throws EvalError(UnboundVariable) if `e` uses a name not in `args`.
  Program(const Expr& e, std::vector<std::string> args);

  std::size_t arity() const noexcept { return args_.size(); }
  const std::vector<std::string>& args() const noexcept { return args_; }

  double operator()(std::span<const double> point) const;
  double operator()(std::initializer_list<double> point) const {
    return (*this)(std::span<const double>(point.begin(), point.size()));
  }

  /// columns[k][i] is argument k of point i; writes out[i] for every point.
  void eval_batch(std::span<const std::span<const double>> columns,
                  std::span<double> out) const;

  /// Evaluates one point and reports the largest |value| over every
  /// intermediate subexpression.
  double eval_tracking(std::span<const double> point, double& max_abs) const;

  /// True when the expression is a constant (no instructions depend on args).
  bool is_constant() const noexcept { return constant_; }

 private:
  struct Instr {
    Op op;
    Func func;
    std::uint32_t a;
    std::uint32_t b;
  };

  void fill_constants(double* regs, std::size_t stride) const;
  void run(std::span<const std::span<const double>> columns, std::size_t begin,
           std::size_t count, std::size_t stride, double* regs, double* max_abs) const;
  [[noreturn]] void non_finite(std::size_t instr,
                               std::span<const std::span<const double>> columns,
                               std::size_t point) const;

  std::vector<std::string> args_;
  // Register layout: [args | constants | instruction results].
  std::vector<double> constants_;
  std::vector<Instr> code_;
  std::vector<Expr> sources_;  // source subexpression of each instruction
  std::uint32_t result_ = 0;
  bool constant_ = true;
};

}  // namespace formcalc
