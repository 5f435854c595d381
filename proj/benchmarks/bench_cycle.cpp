#include <benchmark/benchmark.h>

#include "lamsa/actuator.hpp"
#include "lamsa/body.hpp"
#include "lamsa/config.hpp"
#include "lamsa/fin_sweep.hpp"

namespace {

using namespace lamsa;

void BM_PotentialEnergy(benchmark::State& state) {
  const BeamSpec beam = default_params().beam;
  double q = -6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(potential_energy(q, 4.0, 0.0, beam));
    q = -q;
  }
}
BENCHMARK(BM_PotentialEnergy);

void BM_RestoringForce(benchmark::State& state) {
  const BeamSpec beam = default_params().beam;
  double q = -6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(restoring_force(q, 4.0, 5.0, beam));
    q = -q;
  }
}
BENCHMARK(BM_RestoringForce);

void BM_FinForce(benchmark::State& state) {
  const ScenarioParams p = default_params();
  double omega = 30.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fin_force(omega, 20.0, p.fin, p.fluid));
    omega = -omega;
  }
}
BENCHMARK(BM_FinForce);

void BM_ChainStep(benchmark::State& state) {
  const ScenarioParams p = default_params();
  const ChainContext ctx = ChainContext::make(p, 0.0);
  ChainState st;
  st.q_mm = -6.3;
  st.theta_rad = -0.47;
  for (auto _ : state) {
    st = fin_dynamics_step(st, 5.0, 1e-4, ctx);
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_ChainStep);

void BM_RunCycle(benchmark::State& state) {
  const ScenarioParams p = default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_cycle(p));
  }
}
BENCHMARK(BM_RunCycle);

void BM_Locomotion(benchmark::State& state) {
  const ScenarioParams p = default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_locomotion(int(state.range(0)), {0, 0, 0, 0}, p));
  }
}
BENCHMARK(BM_Locomotion)->Arg(1)->Arg(4);

void BM_SweepRow(benchmark::State& state) {
  const ScenarioParams p = default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fin_size_sweep({double(state.range(0))}, p));
  }
}
BENCHMARK(BM_SweepRow)->Arg(1000)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
