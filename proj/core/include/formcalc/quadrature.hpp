#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace formcalc {

/// Settings shared by every numeric integral in the library.
struct QuadConfig {
  int gauss_order = 8;     ///< Gauss-Legendre points per subinterval, >= 2
  int subdivisions = 16;   ///< equal subintervals per integration axis, >= 1
  double potential_tol = 1e-5;
  double zero_tol = 1e-9;
  std::uint64_t zero_seed = 0;  ///< first Halton index used by zero tests

  /// Throws DomainError on out-of-range settings.
  void validate() const;
};

/// Nodes and weights; on [-1, 1] for gauss_legendre, already scaled for
/// composite_rule.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1]. Cached per order.
const QuadRule& gauss_legendre(int order);

/// Composite rule on [a, b]: `subdivisions` equal pieces, subinterval-major.
/// Empty when a == b; weights are negative when b < a.
QuadRule composite_rule(double a, double b, const QuadConfig& cfg);

/// Pairwise (cascade) summation; order of reduction depends only on size.
double pairwise_sum(std::span<const double> values);

/// Composite Gauss-Legendre estimate of the integral of fn over [a, b].
/// Exact for polynomials of degree <= 2*gauss_order-1 on each subinterval;
/// returns exactly 0 when a == b. Throws EvalError on a non-finite sample.
double quad_1d(const std::function<double(double)>& fn, double a, double b,
               const QuadConfig& cfg = {});

}  // namespace formcalc
