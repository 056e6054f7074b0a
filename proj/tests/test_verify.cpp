#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "formcalc/error.hpp"
#include "formcalc/forms.hpp"
#include "formcalc/verify.hpp"
#include "support/oracles.hpp"

using namespace formcalc;
using formcalc::testing::random_polynomial;

namespace {

constexpr double kPi = std::numbers::pi;

Expr P(const char* s) { return parse_expr(s); }

const DomainBox kBig = DomainBox::cube(-3, 3);

Surface polar_disk(double r) {
  return Surface({"rho", "theta"}, {P("rho*cos(theta)"), P("rho*sin(theta)"), P("0")},
                 {Interval{0, r}, Interval{0, 2 * kPi}});
}

Region ball(double r) {
  return Region({"rho", "phi", "theta"},
                {P("rho*sin(phi)*cos(theta)"), P("rho*sin(phi)*sin(theta)"), P("rho*cos(phi)")},
                {Interval{0, r}, Interval{0, kPi}, Interval{0, 2 * kPi}});
}

Surface unit_square() {
  return Surface({"u", "v"}, {P("u"), P("v"), P("0")}, {Interval{0, 1}, Interval{0, 1}});
}

Region unit_cube() {
  return Region({"u", "v", "w"}, {P("u"), P("v"), P("w")},
                {Interval{0, 1}, Interval{0, 1}, Interval{0, 1}});
}

const char* kPear[3] = {"x/sqrt(x^2+y^2+z^2)", "y/sqrt(x^2+y^2+z^2)", "z/sqrt(x^2+y^2+z^2)"};

}  // namespace

TEST_CASE("report arithmetic") {
  VerifyReport r = make_report("ftc", 2.0, 2.5, 0.2, {});
  CHECK(r.abs_err == 0.5);
  CHECK(r.rel_err == 0.5 / 3.5);
  CHECK(r.pass);
  VerifyReport s = make_report("ftc", 2.5, 2.0, 0.2, {});
  CHECK(s.pass == r.pass);
  CHECK(s.rel_err == r.rel_err);
  CHECK_FALSE(make_report("ftc", 0, 1, 0.1, {}).pass);
}

TEST_SUITE("ftc") {
  TEST_CASE("xyz along a segment") {
    Path seg("t", {P("t"), P("2*t"), P("3*t")}, {0, 1});
    VerifyReport r = verify_ftc({P("x*y*z"), kBig}, seg);
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(r.rhs == 6.0);
  }

  TEST_CASE("closed circle") {
    Path circle("t", {P("cos(t)"), P("sin(t)"), P("0")}, {0, 2 * kPi});
    VerifyReport r = verify_ftc({P("exp(x)*y + z"), kBig}, circle);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs) <= 1e-12);
    CHECK(std::abs(r.rhs) <= 1e-15);
  }

  TEST_CASE("constant function") {
    Path seg("t", {P("t"), P("t^2"), P("1")}, {-1, 1});
    VerifyReport r = verify_ftc({P("7"), kBig}, seg);
    CHECK(r.pass);
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == 0.0);
  }
}

TEST_SUITE("stokes") {
  TEST_CASE("rotational field over disks") {
    for (double r : {1.0, 2.0}) {
      VerifyReport rep = verify_stokes({P("-(y/2)"), P("x/2"), P("0"), kBig}, polar_disk(r));
      CHECK(rep.pass);
      CHECK(rep.lhs == doctest::Approx(kPi * r * r).epsilon(1e-12));
      CHECK(rep.rhs == doctest::Approx(kPi * r * r).epsilon(1e-12));
      CHECK(rep.rel_err <= 1e-8);
      CHECK(rep.diagnostics.size() == 4);
    }
  }

  TEST_CASE("closed form over a curved surface") {
    Surface s({"u", "v"}, {P("u"), P("v"), P("u^2 - v^2")}, {Interval{-1, 1}, Interval{-1, 1}});
    VerifyReport r = verify_stokes({P("y*z"), P("x*z"), P("x*y"), kBig}, s);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs) <= 1e-12);
    CHECK(std::abs(r.rhs) <= 1e-12);
  }

  TEST_CASE("zero form") {
    VerifyReport r = verify_stokes({P("0"), P("0"), P("0"), kBig}, polar_disk(1));
    CHECK(r.pass);
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == 0.0);
  }

  TEST_CASE("exact forms have vanishing sides") {
    std::mt19937_64 rng(1);
    QuadConfig cfg{.gauss_order = 6, .subdivisions = 4};
    Surface s({"u", "v"}, {P("u*cos(v)"), P("u*sin(v)"), P("u*v/4")},
              {Interval{0.2, 1}, Interval{0, 2}});
    for (int n = 0; n < 10; ++n) {
      Form1 exact = d0({random_polynomial(rng), kBig});
      VerifyReport r = verify_stokes(exact, s, cfg, 1e-8);
      CHECK(r.pass);
      CHECK(std::abs(r.lhs) <= 1e-8);
      CHECK(std::abs(r.rhs) <= 1e-8 * (1 + r.diagnostics.size()));
    }
  }
}

TEST_SUITE("planar") {
  TEST_CASE("green on the unit disk") {
    VerifyReport r = verify_green(P("-(y/2)"), P("x/2"), polar_disk(1));
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(r.rhs == doctest::Approx(kPi).epsilon(1e-13));
  }

  TEST_CASE("plane divergence on the unit disk") {
    VerifyReport r = verify_plane_divergence(P("x"), P("y"), polar_disk(1));
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(2 * kPi).epsilon(1e-13));
    CHECK(r.rhs == doctest::Approx(2 * kPi).epsilon(1e-13));
  }

  TEST_CASE("zero field") {
    CHECK(verify_green(P("0"), P("0"), polar_disk(1)).lhs == 0.0);
    CHECK(verify_plane_divergence(P("0"), P("0"), unit_square()).pass);
  }

  TEST_CASE("non-planar surfaces are rejected") {
    Surface tilted({"u", "v"}, {P("u"), P("v"), P("u")}, {Interval{0, 1}, Interval{0, 1}});
    CHECK_THROWS_AS(verify_green(P("x"), P("y"), tilted), DomainError);
    CHECK_THROWS_AS(verify_plane_divergence(P("x"), P("y"), tilted), DomainError);
  }
}

TEST_SUITE("gauss") {
  TEST_CASE("radial unit field over the unit ball") {
    VerifyReport r = verify_gauss({P(kPear[0]), P(kPear[1]), P(kPear[2]), kBig}, ball(1));
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(4 * kPi).epsilon(1e-8));
    CHECK(r.rhs == doctest::Approx(4 * kPi).epsilon(1e-12));
    CHECK(r.diagnostics.size() == 6);
  }

  TEST_CASE("divergence-free exercise form over the cube") {
    VerifyReport r = verify_gauss({P("x"), P("2*y"), P("-3*z"), kBig}, unit_cube());
    CHECK(r.pass);
    CHECK(r.lhs == 0.0);
    CHECK(std::abs(r.rhs) <= 1e-14);
  }

  TEST_CASE("volume from a surface integral") {
    VerifyReport r = verify_gauss({P("x/3"), P("y/3"), P("z/3"), kBig}, ball(1));
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
  }
}

TEST_CASE("every verifier passes on random polynomial forms over the unit square and cube") {
  std::mt19937_64 rng(2);
  // Degree <= 3 coefficients with polynomial chains are integrated exactly at this order.
  QuadConfig cfg{.gauss_order = 4, .subdivisions = 2};
  for (int n = 0; n < 50; ++n) {
    auto poly = [&] { return random_polynomial(rng); };
    CHECK(verify_ftc({poly(), kBig}, Path("t", {P("t"), P("1 - t"), P("t^2")}, {0, 1}), cfg, 1e-8)
              .pass);
    CHECK(verify_stokes({poly(), poly(), poly(), kBig}, unit_square(), cfg, 1e-8).pass);
    CHECK(verify_green(poly(), poly(), unit_square(), cfg, 1e-8).pass);
    CHECK(verify_plane_divergence(poly(), poly(), unit_square(), cfg, 1e-8).pass);
    CHECK(verify_gauss({poly(), poly(), poly(), kBig}, unit_cube(), cfg, 1e-8).pass);
  }
}
