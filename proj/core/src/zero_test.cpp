#include "formcalc/zero_test.hpp"

#include <cmath>

#include "formcalc/program.hpp"

namespace formcalc {
namespace {

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

std::array<double, 3> halton3(std::uint64_t index) {
  return {radical_inverse(index, 2), radical_inverse(index, 3), radical_inverse(index, 5)};
}

ZeroTestResult zero_test(const Expr& e, const DomainBox& box, const ZeroTestConfig& cfg) {
  if (cfg.samples < 1) throw DomainError("zero test needs at least one sample");
  Program prog(e, {"x", "y", "z"});
  ZeroTestResult res;
  for (int i = 0; i < cfg.samples; ++i) {
    // Index 0 is the box corner; start past it.
    auto h = halton3(cfg.seed + 1 + static_cast<std::uint64_t>(i));
    std::array<double, 3> p{box.x.lo + h[0] * box.x.length(), box.y.lo + h[1] * box.y.length(),
                            box.z.lo + h[2] * box.z.length()};
    double scale = 0.0;
    double v = std::abs(prog.eval_tracking(p, scale));
    res.reference_scale = std::max(res.reference_scale, scale);
    if (v > res.max_abs || i == 0) {
      res.max_abs = v;
      res.worst_point = p;
    }
  }
  res.zero = res.max_abs <= cfg.tol * (1.0 + res.reference_scale);
  return res;
}

}  // namespace formcalc
