#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "formcalc/error.hpp"
#include "formcalc/integrate.hpp"
#include "formcalc/quadrature.hpp"
#include "support/oracles.hpp"

using namespace formcalc;
using formcalc::testing::random_polynomial;

namespace {

constexpr double kPi = std::numbers::pi;

Expr P(const char* s) { return parse_expr(s); }

bool rel_close(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::max(1.0, std::abs(want));
}

Path circle(double r, double tmax = 2 * kPi, double speed = 1) {
  Expr s = Expr::constant(speed), R = Expr::constant(r), t = Expr::variable("t");
  return Path("t", {R * cos(s * t), R * sin(s * t), Expr::constant(0)}, {0, tmax});
}

Surface polar_disk(double r) {
  return Surface({"rho", "theta"}, {P("rho*cos(theta)"), P("rho*sin(theta)"), P("0")},
                 {Interval{0, r}, Interval{0, 2 * kPi}});
}

Surface sphere(double r) {
  Expr R = Expr::constant(r);
  return Surface({"phi", "theta"},
                 {R * P("sin(phi)*cos(theta)"), R * P("sin(phi)*sin(theta)"), R * P("cos(phi)")},
                 {Interval{0, kPi}, Interval{0, 2 * kPi}});
}

Region ball(double r) {
  return Region({"rho", "phi", "theta"},
                {P("rho*sin(phi)*cos(theta)"), P("rho*sin(phi)*sin(theta)"), P("rho*cos(phi)")},
                {Interval{0, r}, Interval{0, kPi}, Interval{0, 2 * kPi}});
}

Region unit_cube() {
  return Region({"u", "v", "w"}, {P("u"), P("v"), P("w")},
                {Interval{0, 1}, Interval{0, 1}, Interval{0, 1}});
}

const DomainBox kBig = DomainBox::cube(-3, 3);
const Form1 kRot{P("-(y/2)"), P("x/2"), P("0"), kBig};
const Form2 kPear{P("x/sqrt(x^2+y^2+z^2)"), P("y/sqrt(x^2+y^2+z^2)"),
                  P("z/sqrt(x^2+y^2+z^2)"), kBig};

}  // namespace

TEST_SUITE("quad_1d") {
  TEST_CASE("examples") {
    QuadConfig cfg;
    CHECK(rel_close(quad_1d([](double) { return 1.0; }, 0, 2 * kPi, cfg), 2 * kPi, 1e-15));
    for (double r : {0.5, 1.0, 3.0})
      CHECK(rel_close(quad_1d([](double p) { return 2 * p; }, 0, r, cfg), r * r, 1e-14));
    CHECK(rel_close(quad_1d([](double p) { return std::sin(p); }, 0, kPi, cfg), 2.0, 1e-14));
    CHECK(quad_1d([](double p) { return p * p; }, 1.5, 1.5, cfg) == 0.0);
  }

  TEST_CASE("reversed limits negate") {
    auto f = [](double t) { return std::exp(t); };
    CHECK(quad_1d(f, 2, 0) == -quad_1d(f, 0, 2));
  }

  TEST_CASE("polynomial exactness at each order") {
    for (int order : {2, 3, 5, 8, 12}) {
      QuadConfig cfg{.gauss_order = order, .subdivisions = 1};
      int deg = 2 * order - 1;
      auto f = [deg](double t) { return (deg + 1) * std::pow(t, deg); };
      // Antiderivative t^(deg+1) on [0, 1.3].
      CHECK(rel_close(quad_1d(f, 0, 1.3, cfg), std::pow(1.3, deg + 1), 1e-13));
    }
  }

  TEST_CASE("agrees with an independent Simpson oracle") {
    auto f = [](double t) { return std::exp(-t * t) * std::cos(3 * t); };
    double gl = quad_1d(f, -1, 2);
    double simp = formcalc::testing::simpson(f, -1, 2, 20000);
    CHECK(std::abs(gl - simp) <= 1e-12);
  }

  TEST_CASE("non-finite samples and bad configs are errors") {
    CHECK_THROWS_AS(quad_1d([](double t) { return 1 / (t - t); }, 0, 1), EvalError);
    CHECK_THROWS_AS(quad_1d([](double) { return 1.0; }, 0, 1, {.gauss_order = 1}), DomainError);
    CHECK_THROWS_AS(quad_1d([](double) { return 1.0; }, 0, 1, {.subdivisions = 0}), DomainError);
  }

  TEST_CASE("gauss nodes are symmetric and weights sum to 2") {
    for (int n = 2; n <= 20; ++n) {
      const QuadRule& r = gauss_legendre(n);
      double s = 0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        s += r.weights[i];
        CHECK(std::abs(r.nodes[i] + r.nodes[r.size() - 1 - i]) <= 1e-15);
      }
      CHECK(std::abs(s - 2) <= 1e-14);
    }
  }
}

TEST_SUITE("path") {
  TEST_CASE("rotational field around circles") {
    for (double r : {1.0, 2.0})
      CHECK(rel_close(integrate_path(kRot, circle(r)), kPi * r * r, 1e-12));
  }

  TEST_CASE("area form around the unit circle") {
    Form1 area{P("-y/2"), P("x/2"), P("0"), kBig};
    CHECK(rel_close(integrate_path(area, circle(1)), kPi, 1e-12));
  }

  TEST_CASE("exact form gives the endpoint difference") {
    Form1 df{P("y*z"), P("x*z"), P("x*y"), kBig};
    Path seg("t", {P("t"), P("2*t"), P("3*t")}, {0, 1});
    CHECK(rel_close(integrate_path(df, seg), 6.0, 1e-14));
  }

  TEST_CASE("reparameterization invariance") {
    double a = integrate_path(kRot, circle(1.3));
    double b = integrate_path(kRot, circle(1.3, kPi, 2));
    CHECK(std::abs(a - b) <= 1e-10);
  }

  TEST_CASE("image outside the box is rejected") {
    Form1 small{P("x"), P("0"), P("0"), DomainBox::cube(-1, 1)};
    CHECK_THROWS_AS(integrate_path(small, circle(2)), DomainError);
  }
}

TEST_SUITE("surface") {
  TEST_CASE("disk area") {
    Form2 dxdy{P("0"), P("0"), P("1"), kBig};
    for (double r : {1.0, 2.0})
      CHECK(rel_close(integrate_surface(dxdy, polar_disk(r)), kPi * r * r, 1e-13));
  }

  TEST_CASE("radial unit flux through spheres") {
    for (double r : {1.0, 2.5})
      CHECK(rel_close(integrate_surface(kPear, sphere(r)), 4 * kPi * r * r, 1e-12));
  }

  TEST_CASE("zero form") {
    Form2 zero{P("0"), P("0"), P("0"), kBig};
    CHECK(integrate_surface(zero, sphere(1)) == 0.0);
  }

  TEST_CASE("polynomial exactness on the unit square") {
    // Integral of x^3 y^2 over [0,1]^2 is 1/12.
    Form2 w{P("0"), P("0"), P("x^3*y^2"), kBig};
    Surface sq({"u", "v"}, {P("u"), P("v"), P("0")}, {Interval{0, 1}, Interval{0, 1}});
    CHECK(rel_close(integrate_surface(w, sq), 1.0 / 12, 1e-14));
  }
}

TEST_SUITE("volume") {
  TEST_CASE("divergence of the radial unit field over the ball") {
    Form3 div{P("2/sqrt(x^2+y^2+z^2)"), kBig};
    CHECK(rel_close(integrate_volume(div, ball(1)), 4 * kPi, 1e-10));
  }

  TEST_CASE("unit cube volume") {
    CHECK(rel_close(integrate_volume({P("1"), kBig}, unit_cube()), 1.0, 1e-15));
  }

  TEST_CASE("ball volume") {
    for (double r : {1.0, 1.5})
      CHECK(rel_close(integrate_volume({P("1"), kBig}, ball(r)), 4.0 / 3 * kPi * r * r * r,
                      1e-13));
  }

  TEST_CASE("polynomial exactness on the cube") {
    // Integral of x y^2 z^3 over [0,1]^3 = 1/2 * 1/3 * 1/4.
    CHECK(rel_close(integrate_volume({P("x*y^2*z^3"), kBig}, unit_cube()), 1.0 / 24, 1e-14));
  }
}

TEST_CASE("orientation reversal negates exactly") {
  std::mt19937_64 rng(1);
  QuadConfig cfg{.gauss_order = 4, .subdivisions = 3};
  for (int n = 0; n < 10; ++n) {
    Form1 eta{random_polynomial(rng), random_polynomial(rng), random_polynomial(rng), kBig};
    Form2 om{random_polynomial(rng), random_polynomial(rng), random_polynomial(rng), kBig};
    Form3 nu{random_polynomial(rng), kBig};
    Path c = circle(1.5);
    Surface s = sphere(1.2);
    Region r = ball(1.1);
    CHECK(integrate_path(eta, c.reversed(), cfg) == -integrate_path(eta, c, cfg));
    CHECK(integrate_surface(om, s.reversed(), cfg) == -integrate_surface(om, s, cfg));
    CHECK(integrate_volume(nu, r.reversed(), cfg) == -integrate_volume(nu, r, cfg));
  }
}

TEST_CASE("integrals are linear") {
  std::mt19937_64 rng(2);
  QuadConfig cfg{.gauss_order = 4, .subdivisions = 2};
  double a = 1.75, b = -0.5;
  for (int n = 0; n < 10; ++n) {
    Form2 w1{random_polynomial(rng), random_polynomial(rng), random_polynomial(rng), kBig};
    Form2 w2{random_polynomial(rng), random_polynomial(rng), random_polynomial(rng), kBig};
    Surface s = sphere(1.0);
    double lhs = integrate_surface(linear_combine(a, w1, b, w2), s, cfg);
    double rhs = a * integrate_surface(w1, s, cfg) + b * integrate_surface(w2, s, cfg);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));

    Form1 e1{random_polynomial(rng), random_polynomial(rng), random_polynomial(rng), kBig};
    Form1 e2{random_polynomial(rng), random_polynomial(rng), random_polynomial(rng), kBig};
    double pl = integrate_path(linear_combine(a, e1, b, e2), circle(2), cfg);
    double pr = a * integrate_path(e1, circle(2), cfg) + b * integrate_path(e2, circle(2), cfg);
    CHECK(std::abs(pl - pr) <= 1e-12 * (1 + std::abs(pr)));
  }
}

TEST_CASE("results are bit-stable across runs") {
  Form3 div{P("2/sqrt(x^2+y^2+z^2)"), kBig};
  double a = integrate_volume(div, ball(1));
  double b = integrate_volume(div, ball(1));
  CHECK(a == b);
}
