#include <random>

#include <benchmark/benchmark.h>

#include "dce/dynamics.hpp"
#include "dce/kernels.hpp"

namespace {

struct Fixture {
  explicit Fixture(int N) : c(N, N), w2(N), y(N), dy(N) {
    std::mt19937_64 rng(N);
    std::normal_distribution<double> g;
    for (int i = 0; i < N; ++i) {
      c(i, i) = 0.0;
      for (int j = i + 1; j < N; ++j) {
        c(i, j) = g(rng);
        c(j, i) = -c(i, j);
      }
      w2[i] = (i + 1) * (i + 1) * 9.8696044010893586;
    }
    for (double& v : y.flat()) v = g(rng);
  }
  Eigen::MatrixXd c;
  std::vector<double> w2;
  dce::BasisMatrix y, dy;
  dce::kernels::RhsScalars s{0.97, 0.01};
};

void BM_reference(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    dce::kernels::coupled_rhs_reference(f.c, f.w2, f.s, f.y.flat(), f.dy.flat());
    benchmark::DoNotOptimize(f.dy.flat().data());
  }
  const double N = static_cast<double>(state.range(0));
  state.counters["GFlop/s"] =
      benchmark::Counter(8.0 * N * N * N, benchmark::Counter::kIsIterationInvariantRate,
                         benchmark::Counter::kIs1000);
}

void BM_parallel(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    dce::kernels::coupled_rhs_parallel(f.c, f.w2, f.s, f.y.flat(), f.dy.flat());
    benchmark::DoNotOptimize(f.dy.flat().data());
  }
  const double N = static_cast<double>(state.range(0));
  state.counters["GFlop/s"] =
      benchmark::Counter(8.0 * N * N * N, benchmark::Counter::kIsIterationInvariantRate,
                         benchmark::Counter::kIs1000);
}

}  // namespace

BENCHMARK(BM_reference)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_parallel)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
