/* Copyright 2026 The absflow Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "absflow/explain.hpp"
#include "absflow/lemmas.hpp"
#include "absflow/sim.hpp"
#include "absflow/trace.hpp"

namespace {

using namespace absflow;

Scenario bench_scenario(std::uint64_t seed) {
  RandomScenarioOptions options;
  options.max_steps = 200;
  options.max_epochs = 6;
  options.max_events_per_epoch = 4;
  return with_sampled_failures(random_scenario(seed, options), seed, 2, 60);
}

void BM_Run(benchmark::State& state) {
  const Scenario s = bench_scenario(3);
  std::size_t steps = 0;
  for (auto _ : state) {
    const RunResult r = run(s);
    steps += r.steps_taken;
    benchmark::DoNotOptimize(r.trace.data());
  }
  state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps),
                                                 benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Run);

void BM_ConstructExplanation(benchmark::State& state) {
  const RunResult r = run(bench_scenario(5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(construct_explanation(r.trace, r.execution.front()).verdict);
  }
  state.SetLabel(std::to_string(r.trace.size()) + " steps");
}
BENCHMARK(BM_ConstructExplanation);

void BM_CausalOrder(benchmark::State& state) {
  const RunResult r = run(bench_scenario(7));
  for (auto _ : state) {
    const CausalOrder order(r.trace);
    benchmark::DoNotOptimize(order.happens_before(0, r.trace.size() - 1));
  }
  state.SetLabel(std::to_string(r.trace.size()) + " steps");
}
BENCHMARK(BM_CausalOrder);

void BM_Enumerate(benchmark::State& state) {
  Scenario s;
  s.tasks.push_back(TaskDef{"acc", TaskFunction::sum(), {"in"}, "totals"});
  s.initial_values = {Value::integer(0)};
  s.sources.push_back(make_source("in", {{Value::integer(1)}, {Value::integer(2)}}));
  const Configuration c0 = build_initial(s);
  EnumerationOptions options;
  options.depth = static_cast<std::size_t>(state.range(0));
  options.failure_budget = 1;
  std::size_t traces = 0;
  for (auto _ : state) {
    traces = for_each_execution(c0, options, [](const Trace&, const Configuration&) {}).traces;
  }
  state.counters["traces"] = static_cast<double>(traces);
}
BENCHMARK(BM_Enumerate)->Arg(6)->Arg(8)->Arg(10);

void BM_PropertySuite(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_property_suite(random_scenarios(), 0, 10).size());
  }
}
BENCHMARK(BM_PropertySuite)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
