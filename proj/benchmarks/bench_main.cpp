#include <benchmark/benchmark.h>

#include <vector>

#include "specbgk/conjecture_lab.hpp"
#include "specbgk/scheme.hpp"

using namespace specbgk;

namespace {

const NormalizedPotential& double_well() {
  static const auto p = normalize_potential(RawPotential{{1.0, -2.0, 1.0}});
  return p;
}

void BM_Recurrence(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_recurrence(double_well(), n));
}
BENCHMARK(BM_Recurrence)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& st) {
  const int K = static_cast<int>(st.range(0)), N = static_cast<int>(st.range(1));
  const auto t = build_recurrence(double_well(), N + 4);
  for (auto _ : st) benchmark::DoNotOptimize(assemble_generator(build_deriv_couplings(t, N), K, N));
}
BENCHMARK(BM_Assemble)->Args({20, 30})->Args({40, 60})->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& st) {
  const int K = static_cast<int>(st.range(0)), N = static_cast<int>(st.range(1));
  const auto t = build_recurrence(double_well(), N + 4);
  const auto gen = assemble_generator(build_deriv_couplings(t, N), K, N);
  const SteppingPlan plan(gen, 1e-2);
  const std::vector<InitialCoefficient> ic{{2, 1, 1.0}};
  SpectralState s = project_initial_condition(K, N, ic);
  for (auto _ : st) {
    s = step(plan, s);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Step)->Args({20, 30})->Args({40, 60});

void BM_KnEstimate(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  const int M = 4 * (N + 16);
  const auto t = build_recurrence(double_well(), M + 8);
  const auto phi = build_phi_matrix(t, M + 4);
  for (auto _ : st) benchmark::DoNotOptimize(estimate_kn(phi, N, M));
}
BENCHMARK(BM_KnEstimate)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
