// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The semcom Authors

#include <benchmark/benchmark.h>

#include "semcom/altopt.hpp"
#include "semcom/beamform.hpp"
#include "semcom/harness.hpp"
#include "semcom/numerics.hpp"

using namespace semcom;

namespace {

void BM_LambertW0(benchmark::State& state) {
  double z = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w0(z));
    z = z < 1e6 ? z * 1.01 : 1e-3;
  }
}
BENCHMARK(BM_LambertW0);

void BM_PowerMinSdp(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  RngStream s(1, 0);
  std::vector<ComplexVector> h(static_cast<std::size_t>(k), ComplexVector(5));
  for (auto& v : h)
    for (int i = 0; i < 5; ++i) v(i) = s.cnormal();
  const SinrTargets t{Eigen::VectorXd::Ones(k)};
  const std::vector<double> noise(static_cast<std::size_t>(k), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_power_min(CompositeChannel{h}, t, noise));
  }
}
BENCHMARK(BM_PowerMinSdp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_AlternatingOptimization(benchmark::State& state) {
  ScenarioConfig c;
  c.antennas = 5;
  c.irs_elements = static_cast<int>(state.range(0));
  const Scenario sc = make_scenario(c, 3, c.irs_elements, 0, Algorithm::OptSdp);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(sc, c.solver, algorithm_stream(0)));
  }
}
BENCHMARK(BM_AlternatingOptimization)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
