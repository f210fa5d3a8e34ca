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

#include "absflow/explain.hpp"

#include <gtest/gtest.h>

#include "absflow/errors.hpp"
#include "absflow/sim.hpp"
#include "test_util.hpp"

namespace absflow {
namespace {

using testing::I;

const ProcessorId p0{0};
const ProcessorId p1{1};

Trace trace_of(const Configuration& c0, const std::vector<StepChoice>& choices) {
  Configuration c = c0;
  Trace z;
  for (const StepChoice& ch : choices) {
    AppliedStep s = apply_choice(c, ch);
    z.push_back(s.record);
    c = s.next;
  }
  return z;
}

// Epoch-tagged placeholder steps; only their epochs matter for reordering.
TraceStep tagged_event(Epoch e) {
  return TraceStep::event(p0, {}, {Action::consume("in", MessageData::event(e, I(0)))});
}
TraceStep tagged_border(Epoch e) {
  return TraceStep::border(p0, {}, {Action::consume("in", MessageData::border(e))});
}

TEST(SplitGenerations, Examples) {
  EXPECT_TRUE(split_generations({}).empty());

  const Trace plain{tagged_event(1), tagged_border(1)};
  auto gs = split_generations(plain);
  ASSERT_EQ(gs.size(), 1u);
  EXPECT_FALSE(gs[0].terminated_by_recover);
  EXPECT_EQ(gs[0].steps, plain);

  const Trace faulty{tagged_event(1), TraceStep::fail(p0), TraceStep::recover(), tagged_event(2)};
  gs = split_generations(faulty);
  ASSERT_EQ(gs.size(), 2u);
  EXPECT_EQ(gs[0].steps, Trace(faulty.begin(), faulty.begin() + 3));
  EXPECT_TRUE(gs[0].terminated_by_recover);
  EXPECT_EQ(gs[1].steps, Trace{tagged_event(2)});
  EXPECT_FALSE(gs[1].terminated_by_recover);

  gs = split_generations({TraceStep::recover()});
  ASSERT_EQ(gs.size(), 1u);
  EXPECT_TRUE(gs[0].terminated_by_recover);
}

TEST(SplitGenerations, ConcatenationIsIdentity) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RunResult r = run(with_sampled_failures(random_scenario(seed), seed));
    Trace joined;
    const auto gs = split_generations(r.trace);
    for (std::size_t g = 0; g < gs.size(); ++g) {
      joined.insert(joined.end(), gs[g].steps.begin(), gs[g].steps.end());
      if (g + 1 < gs.size()) {
        EXPECT_TRUE(gs[g].terminated_by_recover);
      }
      for (std::size_t k = 0; k + 1 < gs[g].steps.size(); ++k) {
        EXPECT_FALSE(gs[g].steps[k].is_recover());
      }
    }
    EXPECT_EQ(joined, r.trace);
  }
}

TEST(ReorderGeneration, StablePartitionByEpoch) {
  Generation all_low{{tagged_event(1), tagged_border(1)}, false};
  EXPECT_EQ(reorder_generation(all_low, 1), all_low);

  Generation g{{tagged_event(2), tagged_border(1)}, false};
  EXPECT_EQ(reorder_generation(g, 1).steps, (Trace{tagged_border(1), tagged_event(2)}));

  Generation with_fail{{TraceStep::fail(p0), tagged_event(1), tagged_event(3), tagged_border(1),
                        TraceStep::recover()},
                       true};
  const Generation r = reorder_generation(with_fail, 1);
  EXPECT_TRUE(r.terminated_by_recover);
  EXPECT_EQ(r.steps, (Trace{tagged_event(1), tagged_border(1), TraceStep::fail(p0),
                            tagged_event(3), TraceStep::recover()}));
}

TEST(StripGeneration, KeepsCommittedPrefix) {
  Generation committed{{tagged_event(1), tagged_border(1)}, false};
  EXPECT_EQ(strip_generation(committed, 1), committed.steps);

  Generation failed_only{{TraceStep::fail(p0), TraceStep::recover()}, true};
  EXPECT_TRUE(strip_generation(reorder_generation(failed_only, 0), 0).empty());
}

TEST(StripGeneration, AverageFirstGeneration) {
  Scenario s = testing::average_scenario();
  const Configuration c = build_initial(s);
  const Trace z = trace_of(c, {StepChoice::event(p0, 0), StepChoice::border(p0),
                               StepChoice::event(p0, 0), StepChoice::fail(p0),
                               StepChoice::recover()});
  const auto gs = split_generations(z);
  ASSERT_EQ(gs.size(), 1u);
  const auto stripped = strip_generation(reorder_generation(gs[0], 1), 1);
  EXPECT_EQ(stripped, Trace(z.begin(), z.begin() + 2));
}

TEST(ConstructExplanation, FailureFreeTraceExplainsItself) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RunResult r = run(random_scenario(seed));
    const ExplanationReport rep = construct_explanation(r.trace, r.execution.front());
    EXPECT_EQ(rep.explaining_trace, r.trace);
    EXPECT_TRUE(rep.verdict);
    EXPECT_EQ(rep.mapping.size(), r.execution.size());
    EXPECT_TRUE(std::is_sorted(rep.mapping.begin(), rep.mapping.end()));
  }
}

TEST(ConstructExplanation, EndsMidEpochAfterFailures) {
  Scenario s = testing::pipeline_scenario({{I(1), I(2)}, {I(3)}});
  const Configuration c = build_initial(s);
  // Commit epoch 1, start epoch 2, fail both, recover, redo part of epoch 2
  // and fail again without recovering.
  const Trace z = trace_of(
      c, {StepChoice::event(p0, 0), StepChoice::event(p0, 0), StepChoice::border(p0),
          StepChoice::event(p1, 0), StepChoice::event(p1, 0), StepChoice::border(p1),
          StepChoice::event(p0, 0), StepChoice::event(p1, 0), StepChoice::fail(p1),
          StepChoice::fail(p0), StepChoice::recover(), StepChoice::event(p0, 0),
          StepChoice::fail(p0)});
  const ExplanationReport rep = construct_explanation(z, c);
  EXPECT_TRUE(rep.verdict) << rep.to_json();
  EXPECT_TRUE(rep.joins_hold());
  EXPECT_TRUE(rep.failure_free);
  // Generation 1 keeps the six committed steps; the tail keeps its event.
  EXPECT_EQ(rep.explaining_trace.size(), 7u);
  EXPECT_TRUE(check_failure_transparency_sample(c, std::vector<Trace>{z}));
}

TEST(ConstructExplanation, RejectsInvalidTrace) {
  const Configuration c = build_initial(testing::average_scenario());
  const Trace z{TraceStep::recover()};
  EXPECT_THROW(construct_explanation(z, c), InvalidTraceError);
  try {
    construct_explanation(z, c);
  } catch (const InvalidTraceError& e) {
    EXPECT_EQ(e.index(), 0u);
  }
}

TEST(ObservationalExplanation, Examples) {
  const RunResult r = run(testing::pipeline_scenario({{I(1)}, {I(2)}}));
  const std::vector<Configuration>& cs = r.execution;

  const ObservationalCheck self = check_observational_explanation(cs, cs);
  ASSERT_TRUE(self.explained);
  ASSERT_TRUE(self.mapping);
  // Greedy matching maps every index to the first index with equal output.
  for (std::size_t m = 0; m < cs.size(); ++m) {
    EXPECT_EQ(out(cs[(*self.mapping)[m]]), out(cs[m]));
  }

  const std::vector<Configuration> only_start{cs.front()};
  const ObservationalCheck none = check_observational_explanation(cs, only_start);
  EXPECT_FALSE(none.explained);
  EXPECT_FALSE(none.mapping);
}

TEST(ObservationalExplanation, ExplainedButNotMonotone) {
  const RunResult r = run(testing::pipeline_scenario({{I(1)}, {I(2)}}));
  std::vector<Configuration> impl{r.execution.back(), r.execution.front()};
  std::vector<Configuration> ref{r.execution.front(), r.execution.back()};
  const ObservationalCheck check = check_observational_explanation(impl, ref);
  EXPECT_TRUE(check.explained);
  EXPECT_FALSE(check.mapping);
}

TEST(ObservationalExplanation, CustomObservation) {
  const RunResult r = run(testing::pipeline_scenario({{I(1)}, {I(2)}}));
  const std::vector<Configuration> ref{r.execution.front(), r.execution.back()};
  EXPECT_FALSE(check_observational_explanation(r.execution, ref).explained);
  // Under a constant observation everything matches index 0.
  auto constant = [](const Configuration&) { return 0; };
  const ObservationalCheck check =
      check_observational_explanation(std::span<const Configuration>(r.execution),
                                      std::span<const Configuration>(ref), constant, constant);
  ASSERT_TRUE(check.mapping);
  EXPECT_EQ(*check.mapping, std::vector<std::size_t>(r.execution.size(), 0));
}

TEST(MaxEpoch, OfMessageSet) {
  EXPECT_EQ(max_epoch({}), 0u);
  const MessageSet m{Message{0, "a", MessageData::border(1)},
                     Message{0, "b", MessageData::event(3, I(1))}};
  EXPECT_EQ(max_epoch(m), 3u);
}

TEST(FailureTransparencySample, RandomRuns) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Scenario s = with_sampled_failures(random_scenario(seed), seed + 1000);
    const RunResult r = run(s);
    EXPECT_TRUE(check_failure_transparency_sample(r.execution.front(),
                                                  std::vector<Trace>{r.trace}))
        << "seed " << seed;
  }
}

}  // namespace
}  // namespace absflow
