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

// Scenario-driven execution: a seeded random scheduler with failure
// injection, a fair round-robin scheduler, a bounded liveness check and an
// exhaustive explorer for small scenarios.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absflow/model.hpp"
#include "absflow/semantics.hpp"
#include "absflow/trace.hpp"

namespace absflow {

struct SourceInput {
  StreamName stream;
  /// Epoch-tagged events, each epoch closed by a Border.
  std::vector<MessageData> messages;

  bool operator==(const SourceInput&) const = default;
};

struct ScheduledFailure {
  /// Injected as the step with this index, or as soon after as the run is
  /// still going.
  std::size_t step_index = 0;
  ProcessorId processor;

  bool operator==(const ScheduledFailure&) const = default;
};

struct Scenario {
  std::vector<TaskDef> tasks;
  /// One per task.
  std::vector<Value> initial_values;
  std::vector<SourceInput> sources;
  std::vector<ScheduledFailure> failures;
  std::size_t recovery_delay_max = 0;
  std::size_t max_steps = 1000;
  std::uint64_t seed = 0;

  bool operator==(const Scenario&) const = default;
};

/// Groups per-epoch event payloads into border-terminated source messages:
/// epochs[k] holds the events of epoch k + 1.
SourceInput make_source(const StreamName& stream,
                        const std::vector<std::vector<Value>>& epochs);

/// Every violated scenario invariant, as readable messages. Empty when valid.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Initial configuration of a scenario. Throws ScenarioError.
Configuration build_initial(const Scenario& s);

struct RunResult {
  std::vector<Configuration> execution;
  Trace trace;
  /// No Event, Border or Recover step is enabled at the last configuration.
  bool terminated = false;
  std::size_t steps_taken = 0;
};

/// Seeded random scheduler. Scheduled failures are injected at their step
/// index; once a processor has failed, Recover competes with the other
/// choices and is forced recovery_delay_max steps later (or as soon as
/// nothing else is enabled). Stops at max_steps or quiescence.
RunResult run(const Scenario& s, RecoveryMode mode = RecoveryMode::kPurge);

/// Round-robin over processors; each processor rotates over its inputs and
/// its border, so a choice that stays enabled is taken within
/// fairness_bound(s) steps. Recover is taken at the failure deadline or
/// when nothing else is enabled. Runs until quiescence or max_steps.
RunResult run_fair(const Scenario& s);

/// Like run_fair, but never schedules Event or Border steps of `victim`.
RunResult run_starving(const Scenario& s, ProcessorId victim);

/// |Pi| * (max fan-in + 1).
std::size_t fairness_bound(const Scenario& s);

/// A max_steps large enough for a fair run of s to quiesce: one complete
/// pass over the inputs per failure plus one, after the last failure.
std::size_t fair_step_budget(const Scenario& s);

struct LivenessReport {
  bool live = false;
  /// The run ended because nothing productive was enabled, not because the
  /// step budget ran out.
  bool quiesced = false;
  std::size_t steps = 0;
  std::vector<Epoch> input_epochs;
  /// Epochs of M0 never observed in out.
  std::vector<Epoch> missing;
  /// Earliest execution index whose out holds a message of the epoch.
  std::map<Epoch, std::size_t> first_visible;
};

/// Every epoch present in M0 shows up in out of some configuration of r.
LivenessReport liveness_of(const Scenario& s, const RunResult& r);

bool check_liveness(const Scenario& s);

struct EnumerationOptions {
  std::size_t depth = 0;
  /// Maximum number of Fail steps. 0 also excludes Recover.
  std::size_t failure_budget = 0;
  /// Abort with StateLimitExceeded after this many trace nodes.
  std::size_t node_limit = 5'000'000;
  /// Also count distinct configurations reached (costs memory).
  bool count_configurations = false;
  RecoveryMode mode = RecoveryMode::kPurge;
};

struct EnumerationStats {
  std::size_t traces = 0;
  std::size_t max_length = 0;
  std::size_t distinct_configurations = 0;
};

/// Visits every valid trace of length <= depth from c (every prefix
/// included, the empty trace first) in depth-first order, with the
/// configuration it ends in.
using TraceVisitor = std::function<void(const Trace&, const Configuration&)>;
EnumerationStats for_each_execution(const Configuration& c, const EnumerationOptions& options,
                                    const TraceVisitor& visit);

/// The set of all valid traces of length <= depth from build_initial(s).
std::set<Trace> enumerate_executions(const Scenario& s, std::size_t depth,
                                     std::size_t failure_budget,
                                     std::size_t node_limit = 5'000'000);

/// ABSFLOW_STATE_LIMIT if set to a positive integer, otherwise `fallback`.
std::size_t state_limit_from_env(std::size_t fallback = 5'000'000);

struct RandomScenarioOptions {
  std::size_t max_tasks = 3;
  std::size_t max_sources = 2;
  std::size_t max_epochs = 3;
  std::size_t max_events_per_epoch = 2;
  std::int64_t max_payload = 9;
  std::size_t max_steps = 60;
};

/// A small random valid scenario: integer sources with equal epoch counts
/// and a random acyclic graph of integer tasks. No failures.
Scenario random_scenario(std::uint64_t seed, const RandomScenarioOptions& options = {});

/// Copy of s with 0..max_failures failures at random steps below `horizon`,
/// sorted by step index, and the run seed replaced by `seed`. horizon 0 means
/// the length of the failure-free run of s.
Scenario with_sampled_failures(const Scenario& s, std::uint64_t seed,
                               std::size_t max_failures = 2, std::size_t horizon = 0);

}  // namespace absflow
