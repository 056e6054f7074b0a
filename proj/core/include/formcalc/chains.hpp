#pragma once

#include <array>
#include <string>

#include "formcalc/domain_box.hpp"
#include "formcalc/expr.hpp"
#include "formcalc/linalg.hpp"

namespace formcalc {

/// t -> (x(t), y(t), z(t)) on [a, b], traversed forwards (+1) or backwards (-1).
struct Path {
  Path(std::string param, std::array<Expr, 3> map, Interval range, int orientation = 1,
       std::string label = {});

  std::string param;
  std::array<Expr, 3> map;
  Interval range;
  int orientation;
  std::string label;  ///< set on induced boundary edges, e.g. "rho=1"

  Vec3 at(double t) const;
  Path reversed() const;
};

/// (u, v) -> (x, y, z) on [a,b] x [c,d].
struct Surface {
  Surface(std::array<std::string, 2> params, std::array<Expr, 3> map,
          std::array<Interval, 2> ranges, int orientation = 1, std::string label = {});

  std::array<std::string, 2> params;
  std::array<Expr, 3> map;
  std::array<Interval, 2> ranges;
  int orientation;
  std::string label;

  Vec3 at(double u, double v) const;
  Surface reversed() const;
};

/// (u, v, w) -> (x, y, z) on [a,b] x [c,d] x [p,q].
struct Region {
  Region(std::array<std::string, 3> params, std::array<Expr, 3> map,
         std::array<Interval, 3> ranges, int orientation = 1);

  std::array<std::string, 3> params;
  std::array<Expr, 3> map;
  std::array<Interval, 3> ranges;
  int orientation;

  Vec3 at(double u, double v, double w) const;
  Region reversed() const;
};

struct SignedPoint {
  Vec3 point;
  int weight;
};

/// Start carries weight -1, end carries +1.
struct SignedEndpoints {
  SignedPoint start;
  SignedPoint end;
};

SignedEndpoints path_boundary(const Path& c);

/// Edges in order: (v=c, +), (u=b, +), (v=d, -), (u=a, -), i.e. counterclockwise
/// around the parameter rectangle; the surface orientation multiplies each sign.
std::array<Path, 4> surface_boundary(const Surface& s);

/// Faces in order u=a (-), u=b (+), v=c (+), v=d (-), w=p (-), w=q (+), each
/// parameterized by the two remaining parameters in their declared order;
/// the region orientation multiplies each sign.
std::array<Surface, 6> region_boundary(const Region& r);

/// det of the rows d(x,y,z)/du, d(x,y,z)/dv, d(x,y,z)/dw, simplified.
Expr jacobian3(const Region& r);

}  // namespace formcalc
