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

#include "absflow/lemmas.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "test_util.hpp"

namespace absflow {
namespace {

using testing::I;

TEST(PropertyCatalog, NamesAreUniqueAndStable) {
  const auto& catalog = property_catalog();
  ASSERT_EQ(catalog.size(), 14u);
  std::set<std::string> names;
  for (const Property& p : catalog) names.insert(p.name);
  EXPECT_EQ(names.size(), catalog.size());
  EXPECT_EQ(catalog.front().name, "prefix-validity");
  EXPECT_EQ(catalog.back().name, "explanation-under-coarser-observation");
}

TEST(PropertySuite, RandomScenarios) {
  const auto results = run_property_suite(random_scenarios(), 0, 60);
  for (const PropertyResult& r : results) {
    EXPECT_TRUE(r.ok()) << r.name << " seed " << r.failing_seed.value_or(0) << ": " << r.detail;
    EXPECT_EQ(r.runs, 60u);
  }
}

TEST(PropertySuite, BundledAverageScenario) {
  const auto results = run_property_suite(sampled_failures_of(testing::average_scenario()), 5, 40);
  for (const PropertyResult& r : results) EXPECT_TRUE(r.ok()) << r.name << ": " << r.detail;
}

TEST(PropertySuite, PurgeMutationViolatesSomeProperty) {
  std::size_t caught = 0;
  const ScenarioFactory make = random_scenarios();
  for (std::uint64_t seed = 0; seed < 300 && caught == 0; ++seed) {
    RunContext ctx(make(seed), seed, RecoveryMode::kSkipMessagePurge);
    for (const Property& p : property_catalog()) {
      std::optional<std::string> outcome;
      try {
        outcome = p.check(ctx);
      } catch (const std::exception& e) {
        outcome = e.what();
      }
      if (outcome) ++caught;
    }
  }
  EXPECT_GT(caught, 0u);
}

TEST(RunContext, DeterministicExplanation) {
  const Scenario s = with_sampled_failures(testing::average_scenario(), 4);
  RunContext a(s, 4);
  RunContext b(s, 4);
  EXPECT_EQ(a.result().trace, b.result().trace);
  EXPECT_EQ(a.explanation().explaining_trace, b.explanation().explaining_trace);
  EXPECT_EQ(&a.explanation(), &a.explanation());
  EXPECT_EQ(a.rng()(), b.rng()());
}

TEST(EpochSorted, StableWithControlStepsLast) {
  const RunResult r = run(with_sampled_failures(testing::average_scenario(), 2));
  const Trace sorted = epoch_sorted(r.trace);
  ASSERT_EQ(sorted.size(), r.trace.size());
  EXPECT_TRUE(std::is_permutation(sorted.begin(), sorted.end(), r.trace.begin()));
  bool control_seen = false;
  for (const TraceStep& s : sorted) {
    const bool control = s.is_fail() || s.is_recover();
    EXPECT_FALSE(control_seen && !control);
    control_seen = control_seen || control;
  }
}

TEST(LinearExtension, IsCausalPermutation) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RunResult r = run(with_sampled_failures(random_scenario(seed), seed));
    std::mt19937_64 rng(seed);
    const std::vector<std::size_t> f = random_linear_extension(r.trace, rng);
    std::vector<std::size_t> sorted = f;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) ASSERT_EQ(sorted[i], i);
    const Trace z2 = permute(r.trace, f);
    EXPECT_TRUE(is_causality_preserving_permutation(r.trace, z2, f));
    EXPECT_TRUE(is_valid(z2, r.execution.front())) << "seed " << seed;
  }
}

TEST(Permute, PlacesStepsAtTargets) {
  const Trace z{TraceStep::fail(ProcessorId{0}), TraceStep::recover(),
                TraceStep::fail(ProcessorId{1})};
  EXPECT_EQ(permute(z, {2, 0, 1}), (Trace{z[1], z[2], z[0]}));
}

}  // namespace
}  // namespace absflow
