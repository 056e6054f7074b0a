#include "formcalc/integrate.hpp"

#include <sstream>

#include "formcalc/program.hpp"

namespace formcalc {
namespace {

using Column = std::span<const double>;

std::vector<double> run(const Program& p, std::initializer_list<Column> cols, std::size_t n) {
  std::vector<Column> c(cols);
  std::vector<double> out(n);
  p.eval_batch(c, out);
  return out;
}

std::vector<double> run(const Program& p, const std::vector<Column>& cols, std::size_t n) {
  std::vector<double> out(n);
  p.eval_batch(cols, out);
  return out;
}

template <std::size_t N>
std::array<Program, 3> compile_map(const std::array<Expr, 3>& map,
                                   const std::array<std::string, N>& params) {
  std::vector<std::string> args(params.begin(), params.end());
  return {Program(map[0], args), Program(map[1], args), Program(map[2], args)};
}

template <std::size_t N>
std::array<Program, 3> compile_partials(const std::array<Expr, 3>& map,
                                        const std::array<std::string, N>& params,
                                        const std::string& wrt) {
  std::vector<std::string> args(params.begin(), params.end());
  return {Program(diff(map[0], wrt), args), Program(diff(map[1], wrt), args),
          Program(diff(map[2], wrt), args)};
}

std::vector<std::string> xyz() { return {"x", "y", "z"}; }

void check_inside(const DomainBox& box, const std::vector<double>& X,
                  const std::vector<double>& Y, const std::vector<double>& Z,
                  const char* what) {
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (!box.contains(X[i], Y[i], Z[i])) {
      std::ostringstream msg;
      msg.precision(17);
      msg << what << " leaves the form's domain box at (" << X[i] << ", " << Y[i] << ", "
          << Z[i] << ")";
      throw DomainError(msg.str());
    }
  }
}

// Evaluates the listed programs (over x, y, z) at the selected points only.
struct Gathered {
  std::vector<std::size_t> index;
  std::vector<double> x, y, z;

  void add(std::size_t i, double px, double py, double pz) {
    index.push_back(i);
    x.push_back(px);
    y.push_back(py);
    z.push_back(pz);
  }
  std::vector<double> eval(const Program& p) const {
    return run(p, {Column(x), Column(y), Column(z)}, index.size());
  }
};

}  // namespace

double integrate_path(const Form1& eta, const Path& c, const QuadConfig& cfg) {
  QuadRule rule = composite_rule(c.range.lo, c.range.hi, cfg);
  const std::size_t n = rule.size();
  std::array<std::string, 1> params{c.param};
  auto map = compile_map(c.map, params);
  auto vel = compile_partials(c.map, params, c.param);
  Column t(rule.nodes);

  auto X = run(map[0], {t}, n), Y = run(map[1], {t}, n), Z = run(map[2], {t}, n);
  check_inside(eta.box, X, Y, Z, "path");
  auto dX = run(vel[0], {t}, n), dY = run(vel[1], {t}, n), dZ = run(vel[2], {t}, n);

  Gathered g;
  for (std::size_t i = 0; i < n; ++i) {
    if (dX[i] != 0.0 || dY[i] != 0.0 || dZ[i] != 0.0) g.add(i, X[i], Y[i], Z[i]);
  }
  auto M = g.eval(Program(eta.M, xyz()));
  auto N = g.eval(Program(eta.N, xyz()));
  auto P = g.eval(Program(eta.P, xyz()));

  std::vector<double> terms(n, 0.0);
  for (std::size_t k = 0; k < g.index.size(); ++k) {
    std::size_t i = g.index[k];
    terms[i] = rule.weights[i] * (M[k] * dX[i] + N[k] * dY[i] + P[k] * dZ[i]);
  }
  return c.orientation * pairwise_sum(terms);
}

double integrate_surface(const Form2& omega, const Surface& s, const QuadConfig& cfg) {
  QuadRule ru = composite_rule(s.ranges[0].lo, s.ranges[0].hi, cfg);
  QuadRule rv = composite_rule(s.ranges[1].lo, s.ranges[1].hi, cfg);
  const std::size_t n = ru.size() * rv.size();
  std::vector<double> U(n), V(n), W(n);
  for (std::size_t i = 0; i < ru.size(); ++i) {
    for (std::size_t j = 0; j < rv.size(); ++j) {
      std::size_t k = i * rv.size() + j;
      U[k] = ru.nodes[i];
      V[k] = rv.nodes[j];
      W[k] = ru.weights[i] * rv.weights[j];
    }
  }
  const std::vector<Column> uv{Column(U), Column(V)};
  auto map = compile_map(s.map, s.params);
  auto du = compile_partials(s.map, s.params, s.params[0]);
  auto dv = compile_partials(s.map, s.params, s.params[1]);

  auto X = run(map[0], uv, n), Y = run(map[1], uv, n), Z = run(map[2], uv, n);
  check_inside(omega.box, X, Y, Z, "surface");
  auto xu = run(du[0], uv, n), yu = run(du[1], uv, n), zu = run(du[2], uv, n);
  auto xv = run(dv[0], uv, n), yv = run(dv[1], uv, n), zv = run(dv[2], uv, n);

  // First-row cofactors of the determinant; all zero means a collapsed element.
  Gathered g;
  for (std::size_t k = 0; k < n; ++k) {
    double c1 = yu[k] * zv[k] - zu[k] * yv[k];
    double c2 = zu[k] * xv[k] - xu[k] * zv[k];
    double c3 = xu[k] * yv[k] - yu[k] * xv[k];
    if (c1 != 0.0 || c2 != 0.0 || c3 != 0.0) g.add(k, X[k], Y[k], Z[k]);
  }
  auto S = g.eval(Program(omega.S, xyz()));
  auto T = g.eval(Program(omega.T, xyz()));
  auto Uc = g.eval(Program(omega.U, xyz()));

  std::vector<double> terms(n, 0.0);
  for (std::size_t m = 0; m < g.index.size(); ++m) {
    std::size_t k = g.index[m];
    Matrix3 mat{{{S[m], T[m], Uc[m]}, {xu[k], yu[k], zu[k]}, {xv[k], yv[k], zv[k]}}};
    terms[k] = W[k] * det3_num(mat);
  }
  return s.orientation * pairwise_sum(terms);
}

double integrate_volume(const Form3& nu, const Region& r, const QuadConfig& cfg) {
  QuadRule ru = composite_rule(r.ranges[0].lo, r.ranges[0].hi, cfg);
  QuadRule rv = composite_rule(r.ranges[1].lo, r.ranges[1].hi, cfg);
  QuadRule rw = composite_rule(r.ranges[2].lo, r.ranges[2].hi, cfg);
  auto map = compile_map(r.map, r.params);
  std::vector<std::string> args(r.params.begin(), r.params.end());
  Program jac(jacobian3(r), args);
  Program g(nu.g, xyz());

  // One slab of (v, w) nodes per u node keeps memory bounded; slab totals
  // are reduced pairwise in u order.
  const std::size_t slab = rv.size() * rw.size();
  std::vector<double> U(slab), V(slab), W(slab), weight(slab);
  for (std::size_t j = 0; j < rv.size(); ++j) {
    for (std::size_t k = 0; k < rw.size(); ++k) {
      std::size_t m = j * rw.size() + k;
      V[m] = rv.nodes[j];
      W[m] = rw.nodes[k];
      weight[m] = rv.weights[j] * rw.weights[k];
    }
  }
  const std::vector<Column> cols{Column(U), Column(V), Column(W)};
  std::vector<double> slab_totals(ru.size());
  std::vector<double> terms(slab);
  for (std::size_t i = 0; i < ru.size(); ++i) {
    std::fill(U.begin(), U.end(), ru.nodes[i]);
    auto X = run(map[0], cols, slab), Y = run(map[1], cols, slab), Z = run(map[2], cols, slab);
    check_inside(nu.box, X, Y, Z, "region");
    auto J = run(jac, cols, slab);
    Gathered pts;
    for (std::size_t m = 0; m < slab; ++m) {
      if (J[m] != 0.0) pts.add(m, X[m], Y[m], Z[m]);
    }
    auto G = pts.eval(g);
    std::fill(terms.begin(), terms.end(), 0.0);
    for (std::size_t q = 0; q < pts.index.size(); ++q) {
      std::size_t m = pts.index[q];
      terms[m] = weight[m] * G[q] * J[m];
    }
    slab_totals[i] = ru.weights[i] * pairwise_sum(terms);
  }
  return r.orientation * pairwise_sum(slab_totals);
}

}  // namespace formcalc
