#include <benchmark/benchmark.h>

#include <sstream>

#include "fockdelay/config.hpp"
#include "fockdelay/fock.hpp"
#include "fockdelay/spectral.hpp"
#include "fockdelay/sweep.hpp"
#include "fockdelay/time_domain.hpp"

using namespace fockdelay;

namespace {

Scenario demo() { return preset("demo-feasible").scenario; }

void BM_TransferFunction(benchmark::State& state) {
  const Scenario s = demo();
  const TransferSpec spec = TransferSpec::for_sector(1, s.medium, s.cavity);
  double d = -spec.omega;
  const double step = 2.0 * spec.omega / 4096.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(transfer_function(d, spec));
    d = d > spec.omega ? -spec.omega : d + step;
  }
}
BENCHMARK(BM_TransferFunction);

void BM_SpectralPropagate(benchmark::State& state) {
  Scenario s = demo();
  s.numerics.samples_per_duration = static_cast<double>(state.range(0));
  const SampledEnvelope in = sample_envelope(s);
  const TransferSpec spec = TransferSpec::for_sector(1, s.medium, s.cavity);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(in, spec));
  state.counters["samples"] = static_cast<double>(in.size());
}
BENCHMARK(BM_SpectralPropagate)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_TimeDomainSolve(benchmark::State& state) {
  const Scenario s = demo();
  SolveOptions o;
  o.sector = 1;
  o.z_points = static_cast<int>(state.range(0));
  o.snapshot_count = 1;
  for (auto _ : state) benchmark::DoNotOptimize(solve(s, o));
}
BENCHMARK(BM_TimeDomainSolve)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_AssembleAndGate(benchmark::State& state) {
  const Scenario s = demo();
  for (auto _ : state) benchmark::DoNotOptimize(optimize_gate(assemble(s, Engine::spectral)));
}
BENCHMARK(BM_AssembleAndGate)->Unit(benchmark::kMillisecond);

void BM_AnalyticSweep(benchmark::State& state) {
  const Scenario s = demo();
  SweepPlan plan;
  plan.threads = static_cast<int>(state.range(0));
  plan.axes = {{SweepParameter::OD, 10.0, 1000.0, 100, Spacing::log},
               {SweepParameter::T, 1e-7, 1e-5, 100, Spacing::log}};
  for (auto _ : state) {
    std::ostringstream out;
    write_sweep_csv(out, run_sweep(s, plan));
    benchmark::DoNotOptimize(out.str().size());
  }
}
BENCHMARK(BM_AnalyticSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
