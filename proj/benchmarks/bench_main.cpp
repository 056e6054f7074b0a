#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "formcalc/formcalc.hpp"

using namespace formcalc;

namespace {

const DomainBox kBox = DomainBox::cube(-4, 4);

Region ball(double r) {
  return Region(std::array<std::string, 3>{"rho", "phi", "theta"},
                {parse_expr("rho*sin(phi)*cos(theta)"), parse_expr("rho*sin(phi)*sin(theta)"),
                 parse_expr("rho*cos(phi)")},
                {Interval{0, r}, Interval{0, std::numbers::pi}, Interval{0, 2 * std::numbers::pi}});
}

void BM_Quad1D(benchmark::State& state) {
  QuadConfig cfg;
  cfg.subdivisions = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(quad_1d([](double t) { return std::sin(t) * std::exp(-t); }, 0, 5, cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.gauss_order * cfg.subdivisions);
}
BENCHMARK(BM_Quad1D)->Arg(1)->Arg(16)->Arg(128);

void BM_ProgramBatch(benchmark::State& state) {
  Program p(parse_expr("x^2*y - sin(z)*exp(x*y) + sqrt(x^2+y^2+z^2+1)"), {"x", "y", "z"});
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(n), y(n), z(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 0.001 * static_cast<double>(i);
    y[i] = 1.0 - 0.0005 * static_cast<double>(i);
    z[i] = 0.25;
  }
  const std::span<const double> cols[] = {x, y, z};
  for (auto _ : state) {
    p.eval_batch(cols, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ProgramBatch)->Arg(256)->Arg(1 << 14);

void BM_BallVolume(benchmark::State& state) {
  Region r = ball(1.0);
  Form3 g{parse_expr("x^2 + y*z + 1"), kBox};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_volume(g, r));
}
BENCHMARK(BM_BallVolume)->Unit(benchmark::kMillisecond);

void BM_ScalarPotentialQuery(benchmark::State& state) {
  VectorField F = gradient(Form0{parse_expr("x*y*z + sin(x) + y^2"), kBox});
  ScalarPotential f = scalar_potential(F, {0, 0, 0}, kBox);
  for (auto _ : state) benchmark::DoNotOptimize(f({1.0, -0.5, 2.0}));
}
BENCHMARK(BM_ScalarPotentialQuery)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
