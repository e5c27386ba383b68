#include <benchmark/benchmark.h>

#include "pendspec/critical_curve.hpp"
#include "pendspec/oracle.hpp"
#include "pendspec/pendulum.hpp"
#include "pendspec/spectrum.hpp"

namespace {

using namespace pendspec;

void BM_PendulumIntegrate(benchmark::State& state) {
  ForceFunction A = catalog("sech_well", {{"lambda_bar", 0.8}});
  double alpha0 = fixed_points(0.5).stable;
  for (auto _ : state) {
    PendulumTrajectory t = integrate(A, 0.5, alpha0, 20.0);
    benchmark::DoNotOptimize(t.alpha.back());
  }
}
BENCHMARK(BM_PendulumIntegrate);

void BM_WindingNumber(benchmark::State& state) {
  ForceFunction A = catalog("sech_well", {{"lambda_bar", 0.8}});
  double lambda = 0.5;
  for (auto _ : state) {
    WindingResult r = winding_number(A, lambda);
    benchmark::DoNotOptimize(r.W);
  }
}
BENCHMARK(BM_WindingNumber);

void BM_FindEigenvaluesSech(benchmark::State& state) {
  ForceFunction A = catalog("sech_well", {{"lambda_bar", 0.8}});
  EigenSearchConfig cfg;
  cfg.scan_points = static_cast<int>(state.range(0));
  cfg.build_eigenfunctions = false;
  for (auto _ : state) {
    SpectrumResult res = find_eigenvalues(A, cfg);
    benchmark::DoNotOptimize(res.levels.size());
  }
}
BENCHMARK(BM_FindEigenvaluesSech)->Arg(100)->Arg(1000);

void BM_OracleSolve(benchmark::State& state) {
  auto V = [](double x) { return x * x - 1.0; };
  const int m = static_cast<int>(state.range(0));
  oracle::Options opt;
  opt.eigenvectors = false;
  for (auto _ : state) {
    auto spec = oracle::lowest_eigenvalues(V, 8.0, m, 5, opt);
    benchmark::DoNotOptimize(spec.levels.size());
  }
}
BENCHMARK(BM_OracleSolve)->Arg(1000)->Arg(4000);

void BM_CurveForceEval(benchmark::State& state) {
  CriticalCurve c = curve_catalog("eq14");
  ForceFunction A = force_from_curve(c);
  double x = -10.0;
  for (auto _ : state) {
    x += 0.01;
    if (x > 10.0) x = -10.0;
    benchmark::DoNotOptimize(A(x));
  }
}
BENCHMARK(BM_CurveForceEval);

}  // namespace

BENCHMARK_MAIN();
