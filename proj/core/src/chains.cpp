#include "formcalc/chains.hpp"

namespace formcalc {
namespace {

int checked_orientation(int o) {
  if (o != 1 && o != -1) throw DomainError("orientation must be +1 or -1");
  return o;
}

template <std::size_t N>
void check_params(const std::array<std::string, N>& params, const std::array<Expr, 3>& map) {
  for (std::size_t i = 0; i < N; ++i) {
    if (params[i].empty() || is_reserved_name(params[i])) {
      throw DomainError("invalid chain parameter name '" + params[i] + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (params[i] == params[j]) throw DomainError("chain parameters must be distinct");
    }
  }
  for (const Expr& c : map) {
    for (const auto& v : free_variables(c)) {
      bool declared = false;
      for (const auto& p : params) declared = declared || p == v;
      if (!declared) {
        throw DomainError("chain component uses undeclared variable '" + v + "'");
      }
    }
  }
}

std::array<Expr, 3> fix(const std::array<Expr, 3>& map, const std::string& var, double value) {
  Expr c = Expr::constant(value);
  return {simplify(substitute(map[0], var, c)), simplify(substitute(map[1], var, c)),
          simplify(substitute(map[2], var, c))};
}

std::string label(const std::string& var, double value) {
  return var + "=" + to_string(Expr::constant(value));
}

Vec3 eval_map(const std::array<Expr, 3>& map, const Bindings& b) {
  return {eval(map[0], b), eval(map[1], b), eval(map[2], b)};
}

}  // namespace

Path::Path(std::string param_, std::array<Expr, 3> map_, Interval range_, int orientation_,
           std::string label_)
    : param(std::move(param_)),
      map(std::move(map_)),
      range(range_),
      orientation(checked_orientation(orientation_)),
      label(std::move(label_)) {
  check_params(std::array<std::string, 1>{param}, map);
}

Vec3 Path::at(double t) const { return eval_map(map, {{param, t}}); }

Path Path::reversed() const { return Path(param, map, range, -orientation, label); }

Surface::Surface(std::array<std::string, 2> params_, std::array<Expr, 3> map_,
                 std::array<Interval, 2> ranges_, int orientation_, std::string label_)
    : params(std::move(params_)),
      map(std::move(map_)),
      ranges(ranges_),
      orientation(checked_orientation(orientation_)),
      label(std::move(label_)) {
  check_params(params, map);
}

Vec3 Surface::at(double u, double v) const {
  return eval_map(map, {{params[0], u}, {params[1], v}});
}

Surface Surface::reversed() const { return Surface(params, map, ranges, -orientation, label); }

Region::Region(std::array<std::string, 3> params_, std::array<Expr, 3> map_,
               std::array<Interval, 3> ranges_, int orientation_)
    : params(std::move(params_)),
      map(std::move(map_)),
      ranges(ranges_),
      orientation(checked_orientation(orientation_)) {
  check_params(params, map);
}

Vec3 Region::at(double u, double v, double w) const {
  return eval_map(map, {{params[0], u}, {params[1], v}, {params[2], w}});
}

Region Region::reversed() const { return Region(params, map, ranges, -orientation); }

SignedEndpoints path_boundary(const Path& c) {
  Vec3 first = c.at(c.range.lo);
  Vec3 last = c.at(c.range.hi);
  if (c.orientation < 0) std::swap(first, last);
  return {{first, -1}, {last, +1}};
}

std::array<Path, 4> surface_boundary(const Surface& s) {
  const auto& [u, v] = s.params;
  const auto& [ru, rv] = s.ranges;
  const int o = s.orientation;
  return {
      Path(u, fix(s.map, v, rv.lo), ru, o, label(v, rv.lo)),
      Path(v, fix(s.map, u, ru.hi), rv, o, label(u, ru.hi)),
      Path(u, fix(s.map, v, rv.hi), ru, -o, label(v, rv.hi)),
      Path(v, fix(s.map, u, ru.lo), rv, -o, label(u, ru.lo)),
  };
}

std::array<Surface, 6> region_boundary(const Region& r) {
  const auto& [u, v, w] = r.params;
  const auto& [ru, rv, rw] = r.ranges;
  const int o = r.orientation;
  return {
      Surface({v, w}, fix(r.map, u, ru.lo), {rv, rw}, -o, label(u, ru.lo)),
      Surface({v, w}, fix(r.map, u, ru.hi), {rv, rw}, o, label(u, ru.hi)),
      Surface({u, w}, fix(r.map, v, rv.lo), {ru, rw}, o, label(v, rv.lo)),
      Surface({u, w}, fix(r.map, v, rv.hi), {ru, rw}, -o, label(v, rv.hi)),
      Surface({u, v}, fix(r.map, w, rw.lo), {ru, rv}, -o, label(w, rw.lo)),
      Surface({u, v}, fix(r.map, w, rw.hi), {ru, rv}, o, label(w, rw.hi)),
  };
}

Expr jacobian3(const Region& r) {
  Matrix3Sym m;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) m[row][col] = diff(r.map[col], r.params[row]);
  }
  return det3_sym(m);
}

}  // namespace formcalc
