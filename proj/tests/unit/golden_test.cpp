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

// The incremental-average walkthrough: one task averaging "ints", reset by
// "reset", failing after the first event of epoch 2.

#include <gtest/gtest.h>

#include "absflow/explain.hpp"
#include "absflow/scenario_io.hpp"
#include "absflow/sim.hpp"
#include "test_util.hpp"

namespace absflow {
namespace {

using testing::I;

const ProcessorId p0{0};

Value avg(std::int64_t sum, std::int64_t count) {
  return Value::record({{"sum", sum}, {"count", count}});
}

RunResult golden_run() {
  return run(load_scenario_file(testing::scenario_path("incremental_average.json")));
}

TEST(Golden, TraceShape) {
  const RunResult r = golden_run();
  ASSERT_EQ(r.trace.size(), 9u) << dump_trace(r.trace);
  const std::vector<TraceStep::Rule> rules{
      TraceStep::Rule::kEvent,  TraceStep::Rule::kBorder,  TraceStep::Rule::kEvent,
      TraceStep::Rule::kFail,   TraceStep::Rule::kRecover, TraceStep::Rule::kEvent,
      TraceStep::Rule::kEvent,  TraceStep::Rule::kEvent,   TraceStep::Rule::kBorder};
  for (std::size_t i = 0; i < rules.size(); ++i) EXPECT_EQ(r.trace[i].rule, rules[i]) << i;
  EXPECT_TRUE(r.terminated);
}

TEST(Golden, AverageAfterEveryStep) {
  const RunResult r = golden_run();
  // -1 marks the failed processor.
  const std::vector<std::int64_t> expected{0, 1, 1, 2, -1, 1, 0, 3, 4, 4};
  ASSERT_EQ(r.execution.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const NormalState* st = r.execution[i].states[0].normal();
    const std::int64_t shown = st == nullptr ? -1 : display_scalar(st->value);
    EXPECT_EQ(shown, expected[i]) << "configuration " << i;
  }
}

TEST(Golden, Archives) {
  const RunResult r = golden_run();
  EXPECT_EQ(r.execution[0].states[0].archive, (SnapshotArchive{{0, avg(0, 0)}}));
  EXPECT_EQ(r.execution[2].states[0].archive,
            (SnapshotArchive{{0, avg(0, 0)}, {1, avg(1, 1)}}));
  // Recovery trims nothing: epoch 1 was already the latest snapshot.
  EXPECT_EQ(r.execution[5].states[0].archive, r.execution[2].states[0].archive);
  const SnapshotArchive& last = r.execution.back().states[0].archive;
  ASSERT_EQ(last.size(), 3u);
  EXPECT_EQ(display_scalar(last.at(0)), 0);
  EXPECT_EQ(display_scalar(last.at(1)), 1);
  EXPECT_EQ(display_scalar(last.at(2)), 4);
}

TEST(Golden, FinalOutput) {
  const RunResult r = golden_run();
  const MessageSet o = out(r.execution.back());
  const MessageSet expected{
      Message{0, "avgs", MessageData::event(1, I(1))}, Message{1, "avgs", MessageData::border(1)},
      Message{2, "avgs", MessageData::event(2, I(3))}, Message{3, "avgs", MessageData::event(2, I(4))},
      Message{4, "avgs", MessageData::border(2)}};
  MessageSet avgs;
  for (const Message& m : o) {
    if (m.stream == StreamName("avgs")) avgs.insert(m);
  }
  EXPECT_EQ(avgs, expected);
}

TEST(Golden, Explanation) {
  const RunResult r = golden_run();
  const Configuration& c0 = r.execution.front();
  const ExplanationReport rep = construct_explanation(r.trace, c0);

  // E1, BD1, Reset, E3, E5, BD2 without failures.
  Configuration c = c0;
  Trace expected;
  for (const StepChoice& ch : {StepChoice::event(p0, 0), StepChoice::border(p0),
                               StepChoice::event(p0, 1), StepChoice::event(p0, 0),
                               StepChoice::event(p0, 0), StepChoice::border(p0)}) {
    AppliedStep s = apply_choice(c, ch);
    expected.push_back(s.record);
    c = s.next;
  }
  EXPECT_EQ(rep.explaining_trace, expected);
  EXPECT_EQ(rep.mapping, (std::vector<std::size_t>{0, 0, 2, 2, 2, 2, 2, 2, 2, 6}));
  EXPECT_TRUE(rep.verdict);
  EXPECT_EQ(rep.generation_joins, std::vector<bool>{true});
  EXPECT_EQ(rep.to_json(),
            R"({"explained_len":6,"first_mismatch":null,"mapping":[0,0,2,2,2,2,2,2,2,6],)"
            R"("original_len":9,"verdict":true})");
}

}  // namespace
}  // namespace absflow
