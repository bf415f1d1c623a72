#include <benchmark/benchmark.h>

#include "corrpic/corrpic.hpp"

using namespace corrpic;

namespace {

void BM_HermitianEig(benchmark::State& state) {
  Rng rng(1);
  const auto h = random_hermitian(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(h));
}
BENCHMARK(BM_HermitianEig)->Arg(8)->Arg(32)->Arg(64);

void BM_BuildUll(benchmark::State& state) {
  Rng rng(2);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto inst = random_instance(rng, {d, d}, 3.0, 0);
  const auto basis = build_basis(d);
  for (auto _ : state) benchmark::DoNotOptimize(build_ull(inst.ham, inst.state, basis));
}
BENCHMARK(BM_BuildUll)->Arg(2)->Arg(3)->Arg(4);

void BM_Validate(benchmark::State& state) {
  ValidationOptions opts;
  opts.instances = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(validate(opts));
}
BENCHMARK(BM_Validate)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_DampedSectorExact(benchmark::State& state) {
  DampedHOParams p;
  p.modes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(damped_ho_exact(p, {0.0, 0.01, 500}));
}
BENCHMARK(BM_DampedSectorExact)->Arg(31)->Arg(255)->Unit(benchmark::kMillisecond);

void BM_DampedMemory(benchmark::State& state) {
  DampedHOParams p;
  const bool nz2 = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(damped_ho_memory_evolve(p, {0.0, 0.01, 500}, nz2, 2));
}
BENCHMARK(BM_DampedMemory)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DephasingKernel(benchmark::State& state) {
  DephasingParams p;
  double tau = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dephasing_kernel(p, tau));
    tau = tau < 1.0 ? tau * 1.1 : 0.01;
  }
}
BENCHMARK(BM_DephasingKernel)->Unit(benchmark::kMicrosecond);

void BM_JcUllIntegration(benchmark::State& state) {
  JCParams p;
  p.r1 = 0.6;
  p.r2 = 0.8;
  for (auto _ : state) benchmark::DoNotOptimize(jc_populations(p, JCMethod::ull, {0.0, 0.01, 400}));
}
BENCHMARK(BM_JcUllIntegration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
