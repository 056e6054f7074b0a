#include "formcalc/forms.hpp"

namespace formcalc {
namespace {

void require_same_box(const DomainBox& a, const DomainBox& b) {
  if (!(a == b)) throw DomainError("forms live on different domain boxes");
}

Expr combine(double a, const Expr& u, double b, const Expr& v) {
  return simplify(Expr::constant(a) * u + Expr::constant(b) * v);
}

std::string coefficient(const Expr& e) {
  std::string s = to_string(e);
  bool atomic = e.op() == Op::Variable || e.op() == Op::Call ||
                (e.is_constant() && e.value() >= 0.0);
  return atomic ? s : "(" + s + ")";
}

}  // namespace

int degree(const KForm& form) { return static_cast<int>(form.index()); }

const DomainBox& box_of(const KForm& form) {
  return std::visit([](const auto& f) -> const DomainBox& { return f.box; }, form);
}

Form1 d0(const Form0& f) {
  return {diff(f.f, "x"), diff(f.f, "y"), diff(f.f, "z"), f.box};
}

Form2 d1(const Form1& eta) {
  const auto& [M, N, P, box] = eta;
  return {simplify(diff(P, "y") - diff(N, "z")),
          simplify(diff(M, "z") - diff(P, "x")),
          simplify(diff(N, "x") - diff(M, "y")), box};
}

Form3 d2(const Form2& omega) {
  const auto& [S, T, U, box] = omega;
  return {simplify(diff(S, "x") + diff(T, "y") + diff(U, "z")), box};
}

KForm d(const KForm& form) {
  switch (form.index()) {
    case 0: return d0(std::get<Form0>(form));
    case 1: return d1(std::get<Form1>(form));
    case 2: return d2(std::get<Form2>(form));
    default: throw DomainError("no 4-forms in R^3: d is undefined on a 3-form here");
  }
}

VectorField gradient(const Form0& f) {
  static const std::array<const char*, 3> axes{"x", "y", "z"};
  std::array<Expr, 3> g;
  for (int a = 0; a < 3; ++a) g[a] = diff(f.f, axes[a]);
  return {g[0], g[1], g[2], f.box};
}

VectorField curl(const VectorField& F) {
  // |  i     j     k   |
  // | d/dx  d/dy  d/dz |
  // |  Fi    Fj    Fk  |
  auto [Fi, Fj, Fk] = F.components();
  Expr ci = diff(Fk, "y") - diff(Fj, "z");
  Expr cj = -(diff(Fk, "x") - diff(Fi, "z"));
  Expr ck = diff(Fj, "x") - diff(Fi, "y");
  return {simplify(ci), simplify(cj), simplify(ck), F.box};
}

Form0 divergence(const VectorField& F) {
  return {simplify(diff(F.i, "x") + diff(F.j, "y") + diff(F.k, "z")), F.box};
}

Form1 as_form1(const VectorField& F) { return {F.i, F.j, F.k, F.box}; }
Form2 as_form2(const VectorField& G) { return {G.i, G.j, G.k, G.box}; }
VectorField field_of(const Form1& eta) { return {eta.M, eta.N, eta.P, eta.box}; }
VectorField field_of(const Form2& omega) { return {omega.S, omega.T, omega.U, omega.box}; }

Form0 linear_combine(double a, const Form0& u, double b, const Form0& v) {
  require_same_box(u.box, v.box);
  return {combine(a, u.f, b, v.f), u.box};
}

Form1 linear_combine(double a, const Form1& u, double b, const Form1& v) {
  require_same_box(u.box, v.box);
  return {combine(a, u.M, b, v.M), combine(a, u.N, b, v.N), combine(a, u.P, b, v.P), u.box};
}

Form2 linear_combine(double a, const Form2& u, double b, const Form2& v) {
  require_same_box(u.box, v.box);
  return {combine(a, u.S, b, v.S), combine(a, u.T, b, v.T), combine(a, u.U, b, v.U), u.box};
}

Form3 linear_combine(double a, const Form3& u, double b, const Form3& v) {
  require_same_box(u.box, v.box);
  return {combine(a, u.g, b, v.g), u.box};
}

KForm linear_combine(double a, const KForm& u, double b, const KForm& v) {
  if (u.index() != v.index()) {
    throw DomainError("cannot combine a " + std::to_string(degree(u)) + "-form with a " +
                      std::to_string(degree(v)) + "-form");
  }
  return std::visit(
      [&](const auto& uu) -> KForm {
        using T = std::decay_t<decltype(uu)>;
        return linear_combine(a, uu, b, std::get<T>(v));
      },
      u);
}

std::string to_string(const Form0& f) { return to_string(f.f); }

std::string to_string(const Form1& eta) {
  return coefficient(eta.M) + " dx + " + coefficient(eta.N) + " dy + " + coefficient(eta.P) +
         " dz";
}

std::string to_string(const Form2& omega) {
  return coefficient(omega.S) + " dy dz + " + coefficient(omega.T) + " dx dz + " +
         coefficient(omega.U) + " dx dy";
}

std::string to_string(const Form3& nu) { return coefficient(nu.g) + " dx dy dz"; }

std::string to_string(const VectorField& F) {
  return "(" + to_string(F.i) + ", " + to_string(F.j) + ", " + to_string(F.k) + ")";
}

}  // namespace formcalc
