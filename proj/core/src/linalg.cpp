#include "formcalc/linalg.hpp"

namespace formcalc {

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Expr det3_sym(const Matrix3Sym& m) {
  const auto& a = m;
  Expr minor1 = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  Expr minor2 = a[1][0] * a[2][2] - a[1][2] * a[2][0];
  Expr minor3 = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  return simplify(a[0][0] * minor1 - a[0][1] * minor2 + a[0][2] * minor3);
}

double det3_num(const Matrix3& m) {
  double down = m[0][0] * m[1][1] * m[2][2] + m[0][1] * m[1][2] * m[2][0] +
                m[0][2] * m[1][0] * m[2][1];
  double up = m[2][0] * m[1][1] * m[0][2] + m[2][1] * m[1][2] * m[0][0] +
              m[2][2] * m[1][0] * m[0][1];
  return down - up;
}

}  // namespace formcalc
