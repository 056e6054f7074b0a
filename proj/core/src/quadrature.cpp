#include "formcalc/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "formcalc/error.hpp"

namespace formcalc {

void QuadConfig::validate() const {
  if (gauss_order < 2 || gauss_order > 64) throw DomainError("gauss_order must be in [2, 64]");
  if (subdivisions < 1) throw DomainError("subdivisions must be >= 1");
  if (!(potential_tol > 0.0)) throw DomainError("potential_tol must be positive");
  if (!(zero_tol > 0.0)) throw DomainError("zero_tol must be positive");
}

namespace {

QuadRule build_gauss_legendre(int n) {
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  // Roots are symmetric; find the upper half by Newton iteration on P_n.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    auto lo = static_cast<std::size_t>(i);
    auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace

const QuadRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadRule>(build_gauss_legendre(order));
  return *slot;
}

QuadRule composite_rule(double a, double b, const QuadConfig& cfg) {
  cfg.validate();
  QuadRule out;
  if (a == b) return out;
  if (b < a) {
    // Same nodes as [b, a] with negated weights, so reversal negates exactly.
    out = composite_rule(b, a, cfg);
    for (double& w : out.weights) w = -w;
    return out;
  }
  const QuadRule& base = gauss_legendre(cfg.gauss_order);
  const int m = cfg.subdivisions;
  const double h = (b - a) / m;
  out.nodes.reserve(base.size() * static_cast<std::size_t>(m));
  out.weights.reserve(base.size() * static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    double left = a + k * h;
    double mid = left + 0.5 * h;
    for (std::size_t i = 0; i < base.size(); ++i) {
      out.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
      out.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return out;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double quad_1d(const std::function<double(double)>& fn, double a, double b,
               const QuadConfig& cfg) {
  QuadRule rule = composite_rule(a, b, cfg);
  std::vector<double> terms(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double f = fn(rule.nodes[i]);
    if (!std::isfinite(f)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand is non-finite at " << rule.nodes[i];
      throw EvalError(EvalError::Kind::NonFinite, "integrand", msg.str());
    }
    terms[i] = rule.weights[i] * f;
  }
  return pairwise_sum(terms);
}

}  // namespace formcalc
