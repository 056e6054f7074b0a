#pragma once

#include <string>
#include <vector>

#include "formcalc/chains.hpp"
#include "formcalc/forms.hpp"
#include "formcalc/quadrature.hpp"

namespace formcalc {

/// One boundary piece's share of a boundary-side integral.
struct Contribution {
  std::string label;
  double value;
};

/// Both sides of an integral identity, computed independently.
struct VerifyReport {
  std::string theorem;  ///< "ftc", "stokes", "green", "plane-div", "gauss"
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;  ///< abs_err / (1 + max(|lhs|, |rhs|))
  double tol = 0.0;
  bool pass = false;     ///< rel_err <= tol
  QuadConfig config;
  std::vector<Contribution> diagnostics;
};

/// Fills the error fields and the pass flag from lhs, rhs and tol.
VerifyReport make_report(std::string theorem, double lhs, double rhs, double tol,
                         const QuadConfig& cfg, std::vector<Contribution> diagnostics = {});

constexpr double kDefaultVerifyTol = 1e-6;

/// lhs: integral of df over the path; rhs: f(end) - f(start).
VerifyReport verify_ftc(const Form0& f, const Path& c, const QuadConfig& cfg = {},
                        double tol = kDefaultVerifyTol);

/// lhs: integral of d(eta) over s; rhs: sum of eta over the four boundary edges.
VerifyReport verify_stokes(const Form1& eta, const Surface& s, const QuadConfig& cfg = {},
                           double tol = kDefaultVerifyTol);

/// Planar forms of Stokes. The surface must satisfy z == 0 at every
/// quadrature node (|z| <= 1e-12), otherwise DomainError. M and N are
/// functions of x and y; any z is replaced by 0.
///   green:     int (N_x - M_y) dx dy  vs  loop int M dx + N dy
///   plane-div: int (M_x + N_y) dx dy  vs  loop int -N dx + M dy
VerifyReport verify_green(const Expr& M, const Expr& N, const Surface& s,
                          const QuadConfig& cfg = {}, double tol = kDefaultVerifyTol);
VerifyReport verify_plane_divergence(const Expr& M, const Expr& N, const Surface& s,
                                     const QuadConfig& cfg = {},
                                     double tol = kDefaultVerifyTol);

/// lhs: integral of d(omega) over r; rhs: sum of omega over the six faces.
VerifyReport verify_gauss(const Form2& omega, const Region& r, const QuadConfig& cfg = {},
                          double tol = kDefaultVerifyTol);

}  // namespace formcalc
