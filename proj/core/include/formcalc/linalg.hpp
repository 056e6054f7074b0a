#pragma once

#include <array>
#include <cmath>

#include "formcalc/expr.hpp"

namespace formcalc {

/// Real vector in the i, j, k basis.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);

/// Row-major 3x3 matrices: m[i][j] is row i, column j.
using Matrix3 = std::array<std::array<double, 3>, 3>;
using Matrix3Sym = std::array<std::array<Expr, 3>, 3>;

/// Cofactor expansion along the first row, simplified.
Expr det3_sym(const Matrix3Sym& m);

/// Diagonal rule: three down-right products minus three up-right products.
double det3_num(const Matrix3& m);

}  // namespace formcalc
