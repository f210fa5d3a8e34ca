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

#include "absflow/semantics.hpp"

#include <gtest/gtest.h>

#include "absflow/errors.hpp"
#include "absflow/sim.hpp"
#include "test_util.hpp"

namespace absflow {
namespace {

using testing::I;

const ProcessorId p0{0};
const ProcessorId p1{1};

Value avg(std::int64_t sum, std::int64_t count) {
  return Value::record({{"sum", sum}, {"count", count}});
}

TEST(EnabledSteps, InitialAverageConfiguration) {
  const Configuration c = build_initial(testing::average_scenario());
  // ints starts with E<1>; reset starts with BD1, which an event step skips;
  // the border needs BD1 at the cursor of every input.
  const std::vector<StepChoice> expected{StepChoice::event(p0, 0), StepChoice::fail(p0)};
  EXPECT_EQ(enabled_steps(c), expected);
}

TEST(EventStep, ConsumesAndProduces) {
  const Configuration c0 = build_initial(testing::average_scenario());
  const AppliedStep s = apply_choice(c0, StepChoice::event(p0, 0));
  EXPECT_EQ(s.record.rule, TraceStep::Rule::kEvent);
  EXPECT_EQ(s.record.cursors, c0.cursors[0]);
  const std::vector<Action> x{
      Action::consume("ints", MessageData::event(1, I(1))),
      Action::produce("avgs", MessageData::event(1, I(1)))};
  EXPECT_EQ(s.record.actions, x);
  EXPECT_EQ(*s.next.states[0].normal(), (NormalState{1, avg(1, 1)}));
  EXPECT_EQ(s.next.cursors[0].at("ints"), 1u);
  EXPECT_EQ(s.next.cursors[0].at("avgs"), 1u);
  EXPECT_TRUE(s.next.messages.contains(Message{0, "avgs", MessageData::event(1, I(1))}));
  EXPECT_TRUE(well_formed(s.next));
}

TEST(BorderStep, AlignsInputsAndSnapshots) {
  Configuration c = step_event(build_initial(testing::average_scenario()), p0, 0);
  ASSERT_TRUE(derive_step(c, StepChoice::border(p0)));
  const AppliedStep s = apply_choice(c, StepChoice::border(p0));
  const std::vector<Action> x{Action::consume("ints", MessageData::border(1)),
                              Action::consume("reset", MessageData::border(1)),
                              Action::produce("avgs", MessageData::border(1))};
  EXPECT_EQ(s.record.actions, x);
  EXPECT_EQ(s.next.states[0].archive.at(1), avg(1, 1));
  EXPECT_EQ(*s.next.states[0].normal(), (NormalState{2, avg(1, 1)}));
  EXPECT_EQ(gce(s.next), 1u);
}

TEST(EventStep, OnlyCurrentEpoch) {
  // Before the epoch-1 border, the epoch-2 Reset on "reset" is not consumable.
  Configuration c = step_event(build_initial(testing::average_scenario()), p0, 0);
  EXPECT_FALSE(derive_step(c, StepChoice::event(p0, 1)));
  EXPECT_FALSE(derive_step(c, StepChoice::event(p0, 0))) << "ints is at BD1";
  EXPECT_THROW(apply_choice(c, StepChoice::event(p0, 0)), NotEnabledError);
}

TEST(FailRecover, FailedProcessorIsStuckUntilRecover) {
  Configuration c = build_initial(testing::average_scenario());
  c = step_event(c, p0, 0);
  c = step_border(c, p0);
  c = step_event(c, p0, 0);  // E<3> of epoch 2
  const Configuration before_fail = c;
  c = step_fail(c, p0);
  EXPECT_TRUE(c.states[0].failed());
  const std::vector<StepChoice> expected{StepChoice::fail(p0), StepChoice::recover()};
  EXPECT_EQ(enabled_steps(c), expected);

  const Configuration r = step_recover(c);
  EXPECT_EQ(r, lcs(c));
  EXPECT_EQ(*r.states[0].normal(), (NormalState{2, avg(1, 1)}));
  EXPECT_EQ(r.cursors[0].at("ints"), 2u);
  EXPECT_FALSE(r.messages.contains(Message{2, "avgs", MessageData::event(2, I(2))}))
      << "uncommitted output is purged";
  EXPECT_TRUE(before_fail.messages.contains(Message{2, "avgs", MessageData::event(2, I(2))}));
  EXPECT_TRUE(well_formed(r));
}

TEST(FailRecover, RecoverNeedsAFailure) {
  const Configuration c = build_initial(testing::average_scenario());
  EXPECT_FALSE(derive_step(c, StepChoice::recover()));
  EXPECT_THROW(step_recover(c), NotEnabledError);
}

TEST(FailRecover, SkipPurgeKeepsStaleMessages) {
  Configuration c = build_initial(testing::average_scenario());
  c = step_event(c, p0, 0);
  c = step_border(c, p0);
  c = step_event(c, p0, 0);
  c = step_fail(c, p0);
  const Configuration broken = step_recover(c, RecoveryMode::kSkipMessagePurge);
  EXPECT_EQ(broken.messages, c.messages);
  EXPECT_NE(broken, step_recover(c));
}

TEST(ApplyStep, RejectsTamperedRecords) {
  const Configuration c = build_initial(testing::average_scenario());
  const TraceStep good = apply_choice(c, StepChoice::event(p0, 0)).record;
  EXPECT_TRUE(apply_step(c, good));

  TraceStep wrong_cursor = good;
  wrong_cursor.cursors["ints"] = 1;
  EXPECT_FALSE(apply_step(c, wrong_cursor));

  TraceStep wrong_output = good;
  wrong_output.actions[1] = Action::produce("avgs", MessageData::event(1, I(9)));
  EXPECT_FALSE(apply_step(c, wrong_output));

  TraceStep missing_output = good;
  missing_output.actions.pop_back();
  EXPECT_FALSE(apply_step(c, missing_output));

  TraceStep wrong_processor = good;
  wrong_processor.processor = ProcessorId{3};
  EXPECT_FALSE(apply_step(c, wrong_processor));

  EXPECT_FALSE(apply_step(c, TraceStep::recover()));
}

TEST(EnabledSteps, PipelineDownstreamWaitsForInput) {
  Configuration c = build_initial(testing::pipeline_scenario({{I(4)}}));
  std::vector<StepChoice> expected{StepChoice::event(p0, 0), StepChoice::fail(p0),
                                   StepChoice::fail(p1)};
  EXPECT_EQ(enabled_steps(c), expected);
  c = step_event(c, p0, 0);
  expected = {StepChoice::border(p0), StepChoice::fail(p0), StepChoice::event(p1, 0),
              StepChoice::fail(p1)};
  EXPECT_EQ(enabled_steps(c), expected);
}

// Every enabled choice applies, and nothing outside the list does.
TEST(EnabledSteps, AgreesWithDeriveStep) {
  Scenario s = testing::pipeline_scenario({{I(1), I(2)}, {I(3)}});
  Configuration c = build_initial(s);
  for (int i = 0; i < 12; ++i) {
    const std::vector<StepChoice> enabled = enabled_steps(c);
    for (std::size_t p = 0; p < c.size(); ++p) {
      std::vector<StepChoice> all{StepChoice::event(ProcessorId{p}, 0),
                                  StepChoice::border(ProcessorId{p})};
      for (const StepChoice& ch : all) {
        const bool listed = std::find(enabled.begin(), enabled.end(), ch) != enabled.end();
        EXPECT_EQ(listed, derive_step(c, ch).has_value()) << ch.to_string();
      }
    }
    std::optional<StepChoice> next;
    for (const StepChoice& ch : enabled) {
      if (ch.kind != StepChoice::Kind::kFail) {
        next = ch;
        break;
      }
    }
    if (!next) break;
    c = apply_choice(c, *next).next;
  }
}

}  // namespace
}  // namespace absflow
