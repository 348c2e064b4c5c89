#include <benchmark/benchmark.h>

#include <random>

#include "dicke/certification.hpp"
#include "dicke/evolution.hpp"

using namespace dicke;

namespace {

SystemParams params(int n) {
  SystemParams p;
  p.n_ions = n;
  p.eta = 0.1;
  p.delta = 20.0;
  p.n_max = SystemParams::default_n_max(n);
  p.coupling_scale = 2.0;
  return p;
}

void BM_IntegrateReduced(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = PulseSchedule::linear(40.0, 1.0);
  const auto p = params(n);
  IntegrationOptions opt;
  opt.record_stride = 1 << 30;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_reduced(s, p, default_time_step(s, p), opt));
  }
}
BENCHMARK(BM_IntegrateReduced)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_IntegrateFull(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = PulseSchedule::linear(40.0, 1.0);
  const auto p = params(n);
  IntegrationOptions opt;
  opt.record_stride = 1 << 30;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_full(s, p, default_time_step(s, p), opt));
  }
}
BENCHMARK(BM_IntegrateFull)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CertifyFromState(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const Matrix rho = random_mixed_state(1 << n, 3, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify_from_state(rho, Axis::X));
  }
}
BENCHMARK(BM_CertifyFromState)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
