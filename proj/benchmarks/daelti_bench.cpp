#include "daelti/associate.hpp"
#include "daelti/galerkin_heat.hpp"
#include "daelti/lq_solver.hpp"
#include "daelti/riccati.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using daelti::Index;
using daelti::Matrix;

Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = ud(rng);
  return M;
}

/// c x 2c system whose E has rank c / 2 and with c / 4 inputs.
daelti::DaeLti random_dae(Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index n = 2 * c;
  const Index r = c / 2;
  const Matrix E = random_matrix(c, r, rng) * random_matrix(r, n, rng);
  return daelti::DaeLti(E, random_matrix(c, n, rng), random_matrix(c, std::max<Index>(1, c / 4), rng));
}

void BM_Associate(benchmark::State& state) {
  const daelti::DaeLti dae = random_dae(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(daelti::associate(dae));
}
BENCHMARK(BM_Associate)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolveAre(benchmark::State& state) {
  const daelti::DaeLti dae = random_dae(state.range(0), 2);
  const daelti::StabilizableRestriction r = daelti::stabilizable_restriction(daelti::associate(dae));
  const daelti::LqWeights w = daelti::LqWeights::identity(dae.n(), dae.m(), dae.c());
  for (auto _ : state) benchmark::DoNotOptimize(daelti::solve_are(r, w));
}
BENCHMARK(BM_SolveAre)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolveLyapunov(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Index n = state.range(0);
  const Matrix A = random_matrix(n, n, rng) - static_cast<double>(n) * Matrix::Identity(n, n);
  const Matrix Q = Matrix::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(daelti::solve_lyapunov(A, Q));
}
BENCHMARK(BM_SolveLyapunov)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_HeatDaePipeline(benchmark::State& state) {
  daelti::HeatConfig cfg;
  cfg.N = state.range(0);
  cfg.N_u = cfg.N - cfg.N / 8;
  cfg.mode = cfg.N - cfg.N / 8 - 1;
  const daelti::HeatModels models = daelti::build_heat_models(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(daelti::dae_lq_pipeline(cfg, models));
}
BENCHMARK(BM_HeatDaePipeline)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_HeatBenchmark(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(daelti::run_heat_benchmark(daelti::HeatConfig{}));
}
BENCHMARK(BM_HeatBenchmark)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
