#pragma once

#include <algorithm>
#include <cmath>

#include "formcalc/error.hpp"

namespace formcalc {

/// Closed interval [lo, hi] with lo < hi.
struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi)) throw DomainError("interval requires lo < hi");
  }

  double length() const noexcept { return hi - lo; }
  bool contains(double v, double slack = 0.0) const noexcept {
    return v >= lo - slack && v <= hi + slack;
  }
  bool contains_strictly(double v) const noexcept { return v > lo && v < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned box [x_lo,x_hi] x [y_lo,y_hi] x [z_lo,z_hi].
struct DomainBox {
  Interval x;
  Interval y;
  Interval z;

  static DomainBox cube(double lo, double hi) { return {{lo, hi}, {lo, hi}, {lo, hi}}; }

  const Interval& axis(int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  /// Membership with a relative slack of a few ulps of the box extent.
  bool contains(double px, double py, double pz) const noexcept {
    auto ok = [](const Interval& iv, double v) {
      double slack = 1e-12 * (1.0 + std::max(std::abs(iv.lo), std::abs(iv.hi)));
      return iv.contains(v, slack);
    };
    return ok(x, px) && ok(y, py) && ok(z, pz);
  }
  bool contains_strictly(double px, double py, double pz) const noexcept {
    return x.contains_strictly(px) && y.contains_strictly(py) && z.contains_strictly(pz);
  }

  friend bool operator==(const DomainBox&, const DomainBox&) = default;
};

}  // namespace formcalc
