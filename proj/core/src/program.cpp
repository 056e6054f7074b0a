#include "formcalc/program.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "formcalc/error.hpp"
#include "kernels.hpp"

namespace formcalc {
namespace {

constexpr std::size_t kChunk = 256;

struct Compiler {
  std::vector<std::string>& args;
  std::vector<double>& constants;
  std::vector<std::tuple<Op, Func, std::uint32_t, std::uint32_t>> code;
  std::vector<Expr> sources;

  std::map<std::uint64_t, std::uint32_t> const_slots;
  std::map<std::tuple<int, int, std::uint32_t, std::uint32_t>, std::uint32_t> op_slots;
  std::unordered_map<const void*, std::uint32_t> memo;
  // Constant and instruction slots are numbered provisionally and
  // relocated once the constant count is known.
  static constexpr std::uint32_t kConstTag = 1u << 30;
  static constexpr std::uint32_t kInstrTag = 1u << 31;

  std::uint32_t visit(const Expr& e) {
    if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
    std::uint32_t slot = emit(e);
    memo.emplace(e.id(), slot);
    return slot;
  }

  std::uint32_t emit(const Expr& e) {
    switch (e.op()) {
      case Op::Constant: {
        auto bits = std::bit_cast<std::uint64_t>(e.value());
        auto [it, fresh] = const_slots.try_emplace(
            bits, static_cast<std::uint32_t>(constants.size()) | kConstTag);
        if (fresh) constants.push_back(e.value());
        return it->second;
      }
      case Op::Variable: {
        auto it = std::find(args.begin(), args.end(), e.name());
        if (it == args.end()) {
          throw EvalError(EvalError::Kind::UnboundVariable, e.name(),
                          "unbound variable '" + e.name() + "'");
        }
        return static_cast<std::uint32_t>(it - args.begin());
      }
      default: break;
    }
    std::uint32_t a = visit(e.lhs());
    std::uint32_t b = e.arity() == 2 ? visit(e.rhs()) : 0;
    Func f = e.op() == Op::Call ? e.func() : Func::Sqrt;
    Op op = e.op();
    // Squares run as a multiply; detail::power gives the same bits.
    if (op == Op::Pow && e.rhs().is_constant(2.0)) {
      op = Op::Mul;
      b = a;
    }
    auto key = std::make_tuple(static_cast<int>(op), static_cast<int>(f), a, b);
    auto [it, fresh] =
        op_slots.try_emplace(key, static_cast<std::uint32_t>(code.size()) | kInstrTag);
    if (fresh) {
      code.emplace_back(op, f, a, b);
      sources.push_back(e);
    }
    return it->second;
  }
};

}  // namespace

Program::Program(const Expr& e, std::vector<std::string> args) : args_(std::move(args)) {
  Compiler c{args_, constants_, {}, {}, {}, {}, {}};
  std::uint32_t root = c.visit(e);

  auto n_args = static_cast<std::uint32_t>(args_.size());
  auto n_consts = static_cast<std::uint32_t>(constants_.size());
  auto relocate = [&](std::uint32_t s) -> std::uint32_t {
    if (s & Compiler::kInstrTag) return (s & ~Compiler::kInstrTag) + n_args + n_consts;
    if (s & Compiler::kConstTag) return (s & ~Compiler::kConstTag) + n_args;
    return s;
  };
  code_.reserve(c.code.size());
  for (auto& [op, f, a, b] : c.code) {
    code_.push_back(Instr{op, f, relocate(a), relocate(b)});
  }
  sources_ = std::move(c.sources);
  result_ = relocate(root);
  constant_ = free_variables(e).empty();
}

void Program::fill_constants(double* regs, std::size_t stride) const {
  for (std::size_t k = 0; k < constants_.size(); ++k) {
    std::fill_n(regs + (args_.size() + k) * stride, stride, constants_[k]);
  }
}

void Program::run(std::span<const std::span<const double>> columns, std::size_t begin,
                  std::size_t count, std::size_t stride, double* regs, double* max_abs) const {
  const std::size_t n_args = args_.size();
  auto reg = [&](std::uint32_t s) { return regs + static_cast<std::size_t>(s) * stride; };

  for (std::size_t k = 0; k < n_args; ++k) {
    std::copy_n(columns[k].data() + begin, count, reg(static_cast<std::uint32_t>(k)));
  }
  const auto base = static_cast<std::uint32_t>(n_args + constants_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& ins = code_[i];
    double* out = reg(base + static_cast<std::uint32_t>(i));
    const double* a = reg(ins.a);
    const double* b = reg(ins.b);
    switch (ins.op) {
      case Op::Add: for (std::size_t j = 0; j < count; ++j) out[j] = a[j] + b[j]; break;
      case Op::Sub: for (std::size_t j = 0; j < count; ++j) out[j] = a[j] - b[j]; break;
      case Op::Mul: for (std::size_t j = 0; j < count; ++j) out[j] = a[j] * b[j]; break;
      case Op::Div: for (std::size_t j = 0; j < count; ++j) out[j] = a[j] / b[j]; break;
      case Op::Neg: for (std::size_t j = 0; j < count; ++j) out[j] = -a[j]; break;
      case Op::Pow:
        for (std::size_t j = 0; j < count; ++j) out[j] = detail::power(a[j], b[j]);
        break;
      case Op::Call:
        for (std::size_t j = 0; j < count; ++j) out[j] = detail::apply_call(ins.func, a[j]);
        break;
      default: break;
    }
    // x*0 is 0 for finite x and NaN otherwise, so one NaN test covers the chunk.
    double probe = 0.0;
    for (std::size_t j = 0; j < count; ++j) probe += out[j] * 0.0;
    if (probe != probe) {
      for (std::size_t j = 0; j < count; ++j) {
        if (!std::isfinite(out[j])) non_finite(i, columns, begin + j);
      }
    }
  }
  if (max_abs) {
    const std::size_t total = base + code_.size();
    for (std::size_t s = 0; s < total; ++s) {
      *max_abs = std::max(*max_abs, std::abs(regs[s * stride]));
    }
  }
}

void Program::non_finite(std::size_t instr, std::span<const std::span<const double>> columns,
                         std::size_t point) const {
  std::string sub = to_string(sources_[instr]);
  std::ostringstream msg;
  msg.precision(17);
  msg << "non-finite value in '" << sub << "'";
  if (!args_.empty()) {
    msg << " at (";
    for (std::size_t k = 0; k < args_.size(); ++k) {
      if (k) msg << ", ";
      msg << args_[k] << "=" << columns[k][point];
    }
    msg << ")";
  }
  throw EvalError(EvalError::Kind::NonFinite, sub, msg.str());
}

double Program::operator()(std::span<const double> point) const {
  double ignored = 0.0;
  return eval_tracking(point, ignored);
}

double Program::eval_tracking(std::span<const double> point, double& max_abs) const {
  if (point.size() != args_.size()) {
    throw DomainError("program expects " + std::to_string(args_.size()) + " arguments");
  }
  std::vector<std::span<const double>> columns;
  columns.reserve(point.size());
  for (std::size_t k = 0; k < point.size(); ++k) columns.emplace_back(&point[k], 1);

  thread_local std::vector<double> regs;
  regs.resize(args_.size() + constants_.size() + code_.size());
  fill_constants(regs.data(), 1);
  run(columns, 0, 1, 1, regs.data(), &max_abs);
  return regs[result_];
}

void Program::eval_batch(std::span<const std::span<const double>> columns,
                         std::span<double> out) const {
  if (columns.size() != args_.size()) {
    throw DomainError("program expects " + std::to_string(args_.size()) + " argument columns");
  }
  for (auto col : columns) {
    if (col.size() < out.size()) throw DomainError("argument column shorter than output");
  }
  const std::size_t slots = args_.size() + constants_.size() + code_.size();
  thread_local std::vector<double> regs;
  regs.resize(slots * kChunk);
  fill_constants(regs.data(), kChunk);
  for (std::size_t begin = 0; begin < out.size(); begin += kChunk) {
    std::size_t count = std::min(kChunk, out.size() - begin);
    run(columns, begin, count, kChunk, regs.data(), nullptr);
    std::copy_n(regs.data() + static_cast<std::size_t>(result_) * kChunk, count,
                out.data() + begin);
  }
}

}  // namespace formcalc
