#include <benchmark/benchmark.h>

#include <vector>

#include "eigenlab/eigenfunction.hpp"
#include "eigenlab/legendre.hpp"
#include "eigenlab/nodal.hpp"
#include "eigenlab/norms.hpp"

using namespace eigenlab;

static void BM_AlfRow(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const auto table = alf_table(l);
  std::vector<double> out(static_cast<std::size_t>(l) + 1);
  double t = 0.3;
  for (auto _ : state) {
    alf_row(*table, t, out);
    benchmark::DoNotOptimize(out.data());
    t = t < 0.9 ? t + 1e-3 : 0.3;
  }
  state.SetComplexityN(l);
}
BENCHMARK(BM_AlfRow)->RangeMultiplier(2)->Range(32, 1024)->Complexity(benchmark::oN);

static void BM_RandomHarmonicPoint(benchmark::State& state) {
  const Eigenfunction e = random_harmonic(static_cast<int>(state.range(0)), 1);
  Vec3 x = normalized(Vec3{0.3, -0.4, 0.8});
  for (auto _ : state) benchmark::DoNotOptimize(e.at_sphere(x));
}
BENCHMARK(BM_RandomHarmonicPoint)->Arg(25)->Arg(100)->Arg(200);

static void BM_BatchEvaluation(benchmark::State& state) {
  const Eigenfunction e = random_harmonic(static_cast<int>(state.range(0)), 1);
  const QuadratureGrid grid = sphere_quadrature(2 * static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch(e, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_BatchEvaluation)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_LpNorm(benchmark::State& state) {
  const Eigenfunction e = highest_weight(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lp_norm(e, 6.0).value);
}
BENCHMARK(BM_LpNorm)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_KnNorm(benchmark::State& state) {
  const Eigenfunction e = highest_weight(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kn_norm(e).value);
}
BENCHMARK(BM_KnNorm)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_NodalLength(benchmark::State& state) {
  const Eigenfunction e = random_harmonic(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(nodal_length_at(e, 0.5 / e.lambda()).length);
}
BENCHMARK(BM_NodalLength)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
