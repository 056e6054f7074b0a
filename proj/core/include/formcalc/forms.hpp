#pragma once

#include <array>
#include <string>
#include <variant>

#include "formcalc/domain_box.hpp"
#include "formcalc/expr.hpp"

namespace formcalc {

/// 0-form: a function f(x, y, z).
struct Form0 {
  Expr f;
  DomainBox box;
};

/// 1-form M dx + N dy + P dz.
struct Form1 {
  Expr M, N, P;
  DomainBox box;

  std::array<Expr, 3> coefficients() const { return {M, N, P}; }
};

/// 2-form S dy dz + T dx dz + U dx dy.
///
/// The basis is (dy dz, dx dz, dx dy) and pairs with a vector field
/// G = S i + T j + U k through G . dA, so the middle slot carries the
/// orientation usually written dz dx.
struct Form2 {
  Expr S, T, U;
  DomainBox box;

  std::array<Expr, 3> coefficients() const { return {S, T, U}; }
};

/// 3-form g dx dy dz.
struct Form3 {
  Expr g;
  DomainBox box;
};

/// F = Fi i + Fj j + Fk k.
struct VectorField {
  Expr i, j, k;
  DomainBox box;

  std::array<Expr, 3> components() const { return {i, j, k}; }
};

using KForm = std::variant<Form0, Form1, Form2, Form3>;

int degree(const KForm& form);
const DomainBox& box_of(const KForm& form);

// Exterior derivative at each degree.
Form1 d0(const Form0& f);
Form2 d1(const Form1& eta);
Form3 d2(const Form2& omega);
KForm d(const KForm& form);  // throws DomainError on a 3-form

// Vector-calculus operators, computed from their own definitions rather than
// through d so the two can be checked against each other.
VectorField gradient(const Form0& f);
/// Cofactor expansion of the formal determinant with rows (i, j, k),
/// (d/dx, d/dy, d/dz), (Fi, Fj, Fk).
VectorField curl(const VectorField& F);
Form0 divergence(const VectorField& F);

// Correspondences F <-> F . dr and G <-> G . dA.
Form1 as_form1(const VectorField& F);
Form2 as_form2(const VectorField& G);
VectorField field_of(const Form1& eta);
VectorField field_of(const Form2& omega);

/// Coefficientwise a*u + b*v, simplified. Throws DomainError when the boxes
/// (or, for KForm, the degrees) differ.
Form0 linear_combine(double a, const Form0& u, double b, const Form0& v);
Form1 linear_combine(double a, const Form1& u, double b, const Form1& v);
Form2 linear_combine(double a, const Form2& u, double b, const Form2& v);
Form3 linear_combine(double a, const Form3& u, double b, const Form3& v);
KForm linear_combine(double a, const KForm& u, double b, const KForm& v);

/// Prints e.g. "1 dx + 0 dy + 0 dz"; compound coefficients are parenthesized.
std::string to_string(const Form0& f);
std::string to_string(const Form1& eta);
std::string to_string(const Form2& omega);
std::string to_string(const Form3& nu);
std::string to_string(const VectorField& F);

}  // namespace formcalc
