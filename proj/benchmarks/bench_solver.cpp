#include <benchmark/benchmark.h>

#include <cmath>

#include "stiffspec/expansion.hpp"
#include "stiffspec/limit_spectrum.hpp"
#include "stiffspec/transmission.hpp"

using namespace stiffspec;

namespace {

ProblemSpec demo() { return ProblemSpec::make(-1, 2, "1", "1", "1", "1"); }

ProblemSpec variable_problem() {
  return ProblemSpec::make(-1, 2, "2+x*x", "1", "1", "1+x/4");
}

}  // namespace

static void BM_Characteristic(benchmark::State& state) {
  ProblemSpec p = variable_problem();
  double mu = 2.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(characteristic(p, 1e-3, mu));
    mu += 1e-9;  // defeat caching across iterations
  }
}
BENCHMARK(BM_Characteristic);

static void BM_PairSolve(benchmark::State& state) {
  ProblemSpec p = demo();
  const double mu_d = M_PI * M_PI / 4;
  for (auto _ : state)
    benchmark::DoNotOptimize(eigenvalues_near(p, 1e-3, mu_d, 2, 3.0));
}
BENCHMARK(BM_PairSolve);

static void BM_GlobalScan(benchmark::State& state) {
  ProblemSpec p = demo();
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(eigenvalues(p, 1e-3, count));
}
BENCHMARK(BM_GlobalScan)->Arg(2)->Arg(6);

static void BM_ExpandDouble(benchmark::State& state) {
  ProblemSpec p = demo();
  LimitMode m;
  m.mu = M_PI * M_PI / 4;
  m.kind = ModeKind::Double;
  m = limit_eigenfunction(p, m);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(expand_double(p, m, order));
}
BENCHMARK(BM_ExpandDouble)->Arg(1)->Arg(3);

BENCHMARK_MAIN();
