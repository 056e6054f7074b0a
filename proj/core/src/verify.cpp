#include "formcalc/verify.hpp"

#include <cmath>

#include "formcalc/integrate.hpp"
#include "formcalc/program.hpp"

namespace formcalc {

VerifyReport make_report(std::string theorem, double lhs, double rhs, double tol,
                         const QuadConfig& cfg, std::vector<Contribution> diagnostics) {
  VerifyReport r;
  r.theorem = std::move(theorem);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = r.abs_err / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
  r.tol = tol;
  r.pass = r.rel_err <= tol;
  r.config = cfg;
  r.diagnostics = std::move(diagnostics);
  return r;
}

VerifyReport verify_ftc(const Form0& f, const Path& c, const QuadConfig& cfg, double tol) {
  double lhs = integrate_path(d0(f), c, cfg);
  SignedEndpoints ends = path_boundary(c);
  auto value = [&](const SignedPoint& p) {
    return eval(f.f, {{"x", p.point.x}, {"y", p.point.y}, {"z", p.point.z}});
  };
  double at_start = ends.start.weight * value(ends.start);
  double at_end = ends.end.weight * value(ends.end);
  return make_report("ftc", lhs, at_end + at_start, tol, cfg,
                     {{"start", at_start}, {"end", at_end}});
}

VerifyReport verify_stokes(const Form1& eta, const Surface& s, const QuadConfig& cfg,
                           double tol) {
  double lhs = integrate_surface(d1(eta), s, cfg);
  std::vector<Contribution> parts;
  std::vector<double> values;
  for (const Path& edge : surface_boundary(s)) {
    double v = integrate_path(eta, edge, cfg);
    parts.push_back({edge.label, v});
    values.push_back(v);
  }
  return make_report("stokes", lhs, pairwise_sum(values), tol, cfg, std::move(parts));
}

namespace {

// Shared by the two planar verifiers: integrates `density` dx dy over the
// planar surface and `a dx + b dy` around its boundary.
VerifyReport planar(const char* theorem, const Expr& density, const Expr& a, const Expr& b,
                    const Surface& s, const QuadConfig& cfg, double tol) {
  const std::vector<std::string> uv(s.params.begin(), s.params.end());
  const std::vector<std::string> xy{"x", "y"};
  QuadRule ru = composite_rule(s.ranges[0].lo, s.ranges[0].hi, cfg);
  QuadRule rv = composite_rule(s.ranges[1].lo, s.ranges[1].hi, cfg);
  Program px(s.map[0], uv), py(s.map[1], uv), pz(s.map[2], uv);
  Program xu(diff(s.map[0], uv[0]), uv), xv(diff(s.map[0], uv[1]), uv);
  Program yu(diff(s.map[1], uv[0]), uv), yv(diff(s.map[1], uv[1]), uv);
  Program dens(density, xy);

  std::vector<double> terms;
  terms.reserve(ru.size() * rv.size());
  for (std::size_t i = 0; i < ru.size(); ++i) {
    for (std::size_t j = 0; j < rv.size(); ++j) {
      std::array<double, 2> p{ru.nodes[i], rv.nodes[j]};
      double z = pz(p);
      if (std::abs(z) > 1e-12) {
        throw DomainError("surface is not planar: z = " + std::to_string(z) +
                          " at a quadrature node");
      }
      // dx dy pulls back to the 2x2 Jacobian determinant.
      double jac = xu(p) * yv(p) - xv(p) * yu(p);
      double term = 0.0;
      if (jac != 0.0) term = dens({px(p), py(p)}) * jac;
      terms.push_back(ru.weights[i] * rv.weights[j] * term);
    }
  }
  double lhs = s.orientation * pairwise_sum(terms);

  Program pa(a, xy), pb(b, xy);
  std::vector<Contribution> parts;
  std::vector<double> values;
  for (const Path& edge : surface_boundary(s)) {
    const std::vector<std::string> t{edge.param};
    Program ex(edge.map[0], t), ey(edge.map[1], t);
    Program dx(diff(edge.map[0], edge.param), t), dy(diff(edge.map[1], edge.param), t);
    double v = edge.orientation * quad_1d(
                                      [&](double tt) {
                                        double vx = dx({tt});
                                        double vy = dy({tt});
                                        if (vx == 0.0 && vy == 0.0) return 0.0;
                                        std::array<double, 2> q{ex({tt}), ey({tt})};
                                        return pa(q) * vx + pb(q) * vy;
                                      },
                                      edge.range.lo, edge.range.hi, cfg);
    parts.push_back({edge.label, v});
    values.push_back(v);
  }
  return make_report(theorem, lhs, pairwise_sum(values), tol, cfg, std::move(parts));
}

Expr in_plane(const Expr& e) { return simplify(substitute(e, "z", Expr::constant(0.0))); }

}  // namespace

VerifyReport verify_green(const Expr& M, const Expr& N, const Surface& s,
                          const QuadConfig& cfg, double tol) {
  Expr m = in_plane(M), n = in_plane(N);
  Expr curl_z = simplify(diff(n, "x") - diff(m, "y"));
  return planar("green", curl_z, m, n, s, cfg, tol);
}

VerifyReport verify_plane_divergence(const Expr& M, const Expr& N, const Surface& s,
                                     const QuadConfig& cfg, double tol) {
  Expr m = in_plane(M), n = in_plane(N);
  Expr div = simplify(diff(m, "x") + diff(n, "y"));
  // Green's identity applied to the orthogonal field (-N, M).
  return planar("plane-div", div, simplify(-n), m, s, cfg, tol);
}

VerifyReport verify_gauss(const Form2& omega, const Region& r, const QuadConfig& cfg,
                          double tol) {
  double lhs = integrate_volume(d2(omega), r, cfg);
  std::vector<Contribution> parts;
  std::vector<double> values;
  for (const Surface& face : region_boundary(r)) {
    double v = integrate_surface(omega, face, cfg);
    parts.push_back({face.label, v});
    values.push_back(v);
  }
  return make_report("gauss", lhs, pairwise_sum(values), tol, cfg, std::move(parts));
}

}  // namespace formcalc
