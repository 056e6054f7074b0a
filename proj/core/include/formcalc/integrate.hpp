#pragma once

#include "formcalc/chains.hpp"
#include "formcalc/forms.hpp"
#include "formcalc/quadrature.hpp"

namespace formcalc {

// Pullback integrals. Each is a composite Gauss-Legendre (tensor) rule over
// the chain's parameter box, multiplied by the chain orientation. Chain
// derivatives are symbolic. The chain image is checked against the form's
// box at every quadrature node (DomainError when it leaves).
//
// Nodes where the pulled-back area/volume element vanishes exactly (e.g. a
// face of a ball map collapsed to a point) contribute zero without
// evaluating the form there.

/// Integral of (M x'(t) + N y'(t) + P z'(t)) dt.
double integrate_path(const Form1& eta, const Path& c, const QuadConfig& cfg = {});

/// Integral of det[(S, T, U); d(x,y,z)/du; d(x,y,z)/dv] du dv.
double integrate_surface(const Form2& omega, const Surface& s, const QuadConfig& cfg = {});

/// Integral of g(r(u,v,w)) * jacobian3(r) du dv dw.
double integrate_volume(const Form3& nu, const Region& r, const QuadConfig& cfg = {});

}  // namespace formcalc
