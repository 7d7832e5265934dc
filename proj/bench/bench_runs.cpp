// Copyright 2026 The raqm-lab Authors
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

#include "raqm/bellharness.hpp"

namespace {

using raqm::bell::ExperimentKind;

raqm::bell::ExperimentSetup setup_for(std::int64_t runs, bool certify) {
  auto setup = raqm::bell::canonical_setup(ExperimentKind::Chsh, 10007, 10.0 / 10007);
  setup.runs = static_cast<std::uint64_t>(runs);
  setup.certify = certify;
  return setup;
}

void BM_RunsSerial(benchmark::State& state) {
  const auto setup = setup_for(state.range(0), state.range(1) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(raqm::bell::run_records_serial(setup));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RunsParallel(benchmark::State& state) {
  const auto setup = setup_for(state.range(0), state.range(1) != 0);
  const int threads = static_cast<int>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(raqm::bell::run_records_parallel(setup, threads));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_RunsSerial)->Args({20000, 0})->Args({2000, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunsParallel)
    ->ArgsProduct({{20000}, {0}, {1, 2, 4, 8}})
    ->ArgsProduct({{2000}, {1}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
