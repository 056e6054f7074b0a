#include "formcalc/reconstruct.hpp"

#include <sstream>

#include "formcalc/program.hpp"
#include "formcalc/zero_test.hpp"

namespace formcalc {
namespace {

using Column = std::span<const double>;

const std::vector<std::string>& xyz() {
  static const std::vector<std::string> v{"x", "y", "z"};
  return v;
}

// Integral over `rule` of p evaluated along a line where two coordinates
// are held fixed; `axis` selects which coordinate varies.
double line_integral(const Program& p, const QuadRule& rule, int axis, const Vec3& at) {
  const std::size_t n = rule.size();
  if (n == 0) return 0.0;
  std::vector<double> cols[3];
  for (int a = 0; a < 3; ++a) {
    cols[a] = a == axis ? rule.nodes : std::vector<double>(n, at[a]);
  }
  std::vector<double> vals(n);
  p.eval_batch(std::vector<Column>{cols[0], cols[1], cols[2]}, vals);
  for (std::size_t i = 0; i < n; ++i) vals[i] *= rule.weights[i];
  return pairwise_sum(vals);
}

// For each outer node o, the inner integral over `inner` of p with the inner
// coordinate on `inner_axis` and the outer one on `outer_axis`; the third
// coordinate is fixed at `at`.
std::vector<double> inner_integrals(const Program& p, const QuadRule& outer, int outer_axis,
                                    const QuadRule& inner, int inner_axis, const Vec3& at) {
  const std::size_t no = outer.size();
  const std::size_t ni = inner.size();
  std::vector<double> result(no, 0.0);
  if (no == 0 || ni == 0) return result;
  std::vector<double> cols[3];
  for (int a = 0; a < 3; ++a) cols[a].assign(no * ni, at[a]);
  for (std::size_t o = 0; o < no; ++o) {
    for (std::size_t i = 0; i < ni; ++i) {
      cols[outer_axis][o * ni + i] = outer.nodes[o];
      cols[inner_axis][o * ni + i] = inner.nodes[i];
    }
  }
  std::vector<double> vals(no * ni);
  p.eval_batch(std::vector<Column>{cols[0], cols[1], cols[2]}, vals);
  for (std::size_t o = 0; o < no; ++o) {
    std::span<double> row(vals.data() + o * ni, ni);
    for (std::size_t i = 0; i < ni; ++i) row[i] *= inner.weights[i];
    result[o] = pairwise_sum(row);
  }
  return result;
}

void check_setup(const VectorField& F, const BasePoint& base, const DomainBox& box,
                 const QuadConfig& cfg) {
  cfg.validate();
  if (!(F.box == box)) throw DomainError("field is defined on a different domain box");
  if (!box.contains_strictly(base.x, base.y, base.z)) {
    throw DomainError("base point must lie strictly inside the domain box");
  }
}

void check_query(const DomainBox& box, const Vec3& q) {
  if (!box.contains(q.x, q.y, q.z)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "query point (" << q.x << ", " << q.y << ", " << q.z
        << ") is outside the domain box";
    throw DomainError(msg.str());
  }
}

std::string describe(const ZeroTestResult& r) {
  std::ostringstream msg;
  msg.precision(6);
  msg << "max residual " << r.max_abs << " at (" << r.worst_point[0] << ", "
      << r.worst_point[1] << ", " << r.worst_point[2] << ")";
  return msg.str();
}

ZeroTestConfig zero_config(const QuadConfig& cfg) {
  ZeroTestConfig z;
  z.tol = cfg.zero_tol;
  z.seed = cfg.zero_seed;
  return z;
}

}  // namespace

struct ScalarPotential::Impl {
  BasePoint base;
  DomainBox box;
  QuadConfig cfg;
  Program M, N, P, M_y, M_z, N_z;
};

struct VectorPotential::Impl {
  BasePoint base;
  DomainBox box;
  QuadConfig cfg;
  Program S, T, U;
};

ScalarPotential scalar_potential(const VectorField& F, const BasePoint& base,
                                 const DomainBox& box, const QuadConfig& cfg) {
  check_setup(F, base, box, cfg);
  VectorField c = curl(F);
  const char* names[3] = {"i", "j", "k"};
  auto comps = c.components();
  for (int a = 0; a < 3; ++a) {
    ZeroTestResult r = zero_test(comps[a], box, zero_config(cfg));
    if (!r.zero) {
      throw NotClosedError("no scalar potential: curl F is not zero (" +
                               std::string(names[a]) + " component " + to_string(comps[a]) +
                               ", " + describe(r) + ")",
                           r.max_abs);
    }
  }
  auto impl = std::make_shared<ScalarPotential::Impl>(ScalarPotential::Impl{
      base, box, cfg, Program(F.i, xyz()), Program(F.j, xyz()), Program(F.k, xyz()),
      Program(diff(F.i, "y"), xyz()), Program(diff(F.i, "z"), xyz()),
      Program(diff(F.j, "z"), xyz())});
  ScalarPotential f;
  f.impl_ = std::move(impl);
  return f;
}

double ScalarPotential::operator()(const Vec3& q) const {
  const Impl& d = *impl_;
  check_query(d.box, q);
  const auto& [x0, y0, z0] = d.base;
  QuadRule sx = composite_rule(x0, q.x, d.cfg);
  QuadRule ty = composite_rule(y0, q.y, d.cfg);
  QuadRule rz = composite_rule(z0, q.z, d.cfg);

  // u(q)
  double u = line_integral(d.M, sx, 0, q);

  // v(q): du/dy(x, t, z) = int M_y(s, t, z) ds, for each t node.
  double v = 0.0;
  if (ty.size()) {
    auto uy = inner_integrals(d.M_y, ty, 1, sx, 0, q);
    std::vector<double> terms(ty.size());
    for (std::size_t j = 0; j < ty.size(); ++j) {
      double N = d.N({q.x, ty.nodes[j], q.z});
      terms[j] = ty.weights[j] * (N - uy[j]);
    }
    v = pairwise_sum(terms);
  }

  // w(q): differentiating v under the integral sign gives
  //   dv/dz(x, y, r) = int N_z(x, t, r) dt - du/dz(x, y, r) + du/dz(x, y0, r)
  // (the last two from integrating d/dt du/dz over [y0, y]), so the w
  // integrand is P - int N_z dt - du/dz(x, y0, r).
  double w = 0.0;
  if (rz.size()) {
    auto nz = inner_integrals(d.N_z, rz, 2, ty, 1, q);
    auto uz0 = inner_integrals(d.M_z, rz, 2, sx, 0, {q.x, y0, q.z});
    std::vector<double> terms(rz.size());
    for (std::size_t k = 0; k < rz.size(); ++k) {
      double P = d.P({q.x, q.y, rz.nodes[k]});
      terms[k] = rz.weights[k] * (P - nz[k] - uz0[k]);
    }
    w = pairwise_sum(terms);
  }
  return u + v + w;
}

const BasePoint& ScalarPotential::base() const { return impl_->base; }
const DomainBox& ScalarPotential::box() const { return impl_->box; }
const QuadConfig& ScalarPotential::config() const { return impl_->cfg; }

VectorPotential vector_potential(const VectorField& G, const BasePoint& base,
                                 const DomainBox& box, const QuadConfig& cfg) {
  check_setup(G, base, box, cfg);
  Form0 div = divergence(G);
  ZeroTestResult r = zero_test(div.f, box, zero_config(cfg));
  if (!r.zero) {
    throw NotClosedError("no vector potential: div G = " + to_string(div.f) +
                             " is not zero (" + describe(r) + ")",
                         r.max_abs);
  }
  auto impl = std::make_shared<VectorPotential::Impl>(VectorPotential::Impl{
      base, box, cfg, Program(G.i, xyz()), Program(G.j, xyz()), Program(G.k, xyz())});
  VectorPotential A;
  A.impl_ = std::move(impl);
  return A;
}

double VectorPotential::M(const Vec3& q) const {
  const Impl& d = *impl_;
  check_query(d.box, q);
  QuadRule rz = composite_rule(d.base.z, q.z, d.cfg);
  QuadRule ty = composite_rule(d.base.y, q.y, d.cfg);
  return line_integral(d.T, rz, 2, q) - line_integral(d.U, ty, 1, {q.x, q.y, d.base.z});
}

double VectorPotential::N(const Vec3& q) const {
  const Impl& d = *impl_;
  check_query(d.box, q);
  QuadRule rz = composite_rule(d.base.z, q.z, d.cfg);
  return -line_integral(d.S, rz, 2, q);
}

const BasePoint& VectorPotential::base() const { return impl_->base; }
const DomainBox& VectorPotential::box() const { return impl_->box; }
const QuadConfig& VectorPotential::config() const { return impl_->cfg; }

namespace {

Vec3 field_at(const VectorField& F, const Vec3& q) {
  Bindings b{{"x", q.x}, {"y", q.y}, {"z", q.z}};
  return {eval(F.i, b), eval(F.j, b), eval(F.k, b)};
}

Vec3 step(int axis, double h) {
  return {axis == 0 ? h : 0.0, axis == 1 ? h : 0.0, axis == 2 ? h : 0.0};
}

}  // namespace

double gradient_residual(const ScalarPotential& f, const VectorField& F, const Vec3& q,
                         double h) {
  Vec3 target = field_at(F, q);
  double worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    double g = (f(q + step(a, h)) - f(q - step(a, h))) / (2.0 * h);
    worst = std::max(worst, std::abs(g - target[a]));
  }
  return worst;
}

double curl_residual(const VectorPotential& A, const VectorField& G, const Vec3& q, double h) {
  // Partials of M and N; P is identically zero.
  auto partial = [&](double (VectorPotential::*comp)(const Vec3&) const, int axis) {
    return ((A.*comp)(q + step(axis, h)) - (A.*comp)(q - step(axis, h))) / (2.0 * h);
  };
  Vec3 c{-partial(&VectorPotential::N, 2), partial(&VectorPotential::M, 2),
         partial(&VectorPotential::N, 0) - partial(&VectorPotential::M, 1)};
  Vec3 target = field_at(G, q);
  return std::max({std::abs(c.x - target.x), std::abs(c.y - target.y),
                   std::abs(c.z - target.z)});
}

}  // namespace formcalc
