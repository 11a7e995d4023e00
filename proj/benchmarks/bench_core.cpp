// Copyright 2026 The turlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "turlab/channels.hpp"
#include "turlab/correlator.hpp"
#include "turlab/experiment.hpp"
#include "turlab/gates.hpp"
#include "turlab/rng.hpp"
#include "turlab/tur.hpp"

namespace {

using namespace turlab;

struct Instance {
  channels::KrausChannel ch;
  linalg::ComplexMatrix rho;
  linalg::ComplexMatrix a;
  linalg::ComplexMatrix b;
};

Instance harness_instance(std::size_t id) {
  experiment::ExperimentConfig cfg;
  cfg.seed = 1;
  const auto in = experiment::generate_trial(cfg, id);
  return {experiment::trial_channel(in), experiment::preparation_state(in.theta),
          gates::pauli_string(in.a.label()), gates::pauli_string(in.b.label())};
}

void BM_PartialTrace(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterRng rng(3);
  const auto m = random::density(std::size_t{1} << n, rng);
  std::vector<std::size_t> dims(n, 2);
  const linalg::SubsystemLayout layout(dims);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::partial_trace(m, layout, {0, n - 1}));
}
BENCHMARK(BM_PartialTrace)->DenseRange(3, 7);

void BM_SurvivalActivity(benchmark::State& state) {
  const auto inst = harness_instance(0);
  for (auto _ : state) benchmark::DoNotOptimize(tur::survival_activity(inst.rho, inst.ch));
}
BENCHMARK(BM_SurvivalActivity);

void BM_Qfi(benchmark::State& state) {
  const auto inst = harness_instance(1);
  const auto ps = tur::purify(inst.rho);
  for (auto _ : state) benchmark::DoNotOptimize(tur::qfi(inst.ch, ps));
}
BENCHMARK(BM_Qfi);

void BM_ExactBound(benchmark::State& state) {
  const auto inst = harness_instance(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(correlator::correlator_bound(inst.rho, inst.ch, inst.a, inst.b));
  }
}
BENCHMARK(BM_ExactBound);

void BM_ProtocolCorrelator(benchmark::State& state) {
  const auto inst = harness_instance(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(correlator::protocol_correlator(inst.rho, inst.ch, inst.a, inst.b));
  }
}
BENCHMARK(BM_ProtocolCorrelator);

void BM_NestedCircuit(benchmark::State& state) {
  const auto inst = harness_instance(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(correlator::prepare_nested_state(inst.rho, inst.ch, inst.a, inst.b));
  }
}
BENCHMARK(BM_NestedCircuit)->Unit(benchmark::kMillisecond);

void BM_SampleShots(benchmark::State& state) {
  const auto inst = harness_instance(5);
  const auto st =
      correlator::prepare_correlator_state(inst.rho, inst.ch, inst.a, inst.b, correlator::MeasureBasis::x);
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(correlator::sample_shots(st, shots, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleShots)->Arg(1000)->Arg(100000);

void BM_EvaluateTrial(benchmark::State& state) {
  experiment::ExperimentConfig cfg;
  cfg.seed = 1;
  const auto in = experiment::generate_trial(cfg, 6);
  for (auto _ : state) benchmark::DoNotOptimize(experiment::evaluate_trial(cfg, in));
}
BENCHMARK(BM_EvaluateTrial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
