#pragma once

#include <memory>

#include "formcalc/forms.hpp"
#include "formcalc/linalg.hpp"
#include "formcalc/quadrature.hpp"

namespace formcalc {

/// Fixed point (x0, y0, z0) strictly inside the domain box.
struct BasePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// f with grad f = F, normalized by f(base) = 0. Evaluated on demand by
/// nested quadrature; immutable and safe to call from several threads.
class ScalarPotential {
 public:
  /// Throws DomainError outside the box.
  double operator()(const Vec3& q) const;

  const BasePoint& base() const;
  const DomainBox& box() const;
  const QuadConfig& config() const;

  struct Impl;

 private:
  friend ScalarPotential scalar_potential(const VectorField&, const BasePoint&,
                                          const DomainBox&, const QuadConfig&);
  std::shared_ptr<const Impl> impl_;
};

/// F = (M, N, 0) with curl F = G (the P = 0 gauge).
class VectorPotential {
 public:
  double M(const Vec3& q) const;
  double N(const Vec3& q) const;
  /// Identically zero.
  double P(const Vec3&) const { return 0.0; }
  Vec3 operator()(const Vec3& q) const { return {M(q), N(q), 0.0}; }

  const BasePoint& base() const;
  const DomainBox& box() const;
  const QuadConfig& config() const;

  struct Impl;

 private:
  friend VectorPotential vector_potential(const VectorField&, const BasePoint&,
                                          const DomainBox&, const QuadConfig&);
  std::shared_ptr<const Impl> impl_;
};

/// Builds f = u + v + w from a curl-free F:
///   u = int_{x0}^{x} M(s, y, z) ds
///   v = int_{y0}^{y} [N(x, t, z) - du/dy(x, t, z)] dt
///   w = int_{z0}^{z} [P(x, y, r) - du/dz(x, y, r) - dv/dz(x, y, r)] dr
/// with the inner partials taken under the integral sign on symbolic
/// derivatives of M and N.
///
/// Throws NotClosedError if curl F fails the zero test on `box`, and
/// DomainError if the base point is not interior or F lives on another box.
ScalarPotential scalar_potential(const VectorField& F, const BasePoint& base,
                                 const DomainBox& box, const QuadConfig& cfg = {});

/// Builds F = (M, N, 0) from a divergence-free G = (S, T, U):
///   M = int_{z0}^{z} T(x, y, r) dr - int_{y0}^{y} U(x, t, z0) dt
///   N = -int_{z0}^{z} S(x, y, r) dr
///
/// Throws NotClosedError if div G fails the zero test on `box`.
VectorPotential vector_potential(const VectorField& G, const BasePoint& base,
                                 const DomainBox& box, const QuadConfig& cfg = {});

/// Largest componentwise |central-difference gradient of f - F| at q.
double gradient_residual(const ScalarPotential& f, const VectorField& F, const Vec3& q,
                         double h = 1e-4);

/// Largest componentwise |central-difference curl of A - G| at q.
double curl_residual(const VectorPotential& A, const VectorField& G, const Vec3& q,
                     double h = 1e-4);

}  // namespace formcalc
