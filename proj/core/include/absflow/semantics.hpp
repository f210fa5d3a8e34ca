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

// Derivation rules of the implementation model (I-Event, I-Border, F-Fail,
// F-Recover, composed through S-Step) as an enabled-step enumerator and a
// step applier.

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absflow/model.hpp"
#include "absflow/trace_step.hpp"

namespace absflow {

/// Which derivation to attempt from a configuration.
struct StepChoice {
  enum class Kind { kEvent, kBorder, kFail, kRecover };

  Kind kind = Kind::kRecover;
  ProcessorId processor;
  std::size_t input_index = 0;

  static StepChoice event(ProcessorId p, std::size_t j) { return {Kind::kEvent, p, j}; }
  static StepChoice border(ProcessorId p) { return {Kind::kBorder, p, 0}; }
  static StepChoice fail(ProcessorId p) { return {Kind::kFail, p, 0}; }
  static StepChoice recover() { return {}; }

  /// Event, Border or Recover: the steps that make progress. Fail is always
  /// enabled and is not counted for quiescence.
  bool productive() const { return kind != Kind::kFail; }

  std::string to_string() const;

  auto operator<=>(const StepChoice&) const = default;
  bool operator==(const StepChoice&) const = default;
};

/// How F-Recover treats messages. kSkipMessagePurge is a deliberately broken
/// engine used only to check that the verifier notices.
enum class RecoveryMode { kPurge, kSkipMessagePurge };

/// Choices whose application succeeds, ordered by processor id, then input
/// index (events, border, fail), then Recover.
std::vector<StepChoice> enabled_steps(const Configuration& c);

/// Builds the trace record of `choice` at c, or nullopt if the rule does not
/// apply.
std::optional<TraceStep> derive_step(const Configuration& c, const StepChoice& choice);

/// Re-derives a recorded step at c: the rule's premises must hold and the
/// recorded cursors and actions must match the derivation. nullopt otherwise.
std::optional<Configuration> apply_step(const Configuration& c, const TraceStep& step,
                                        RecoveryMode mode = RecoveryMode::kPurge);

Configuration step_event(const Configuration& c, ProcessorId p, std::size_t j);
Configuration step_border(const Configuration& c, ProcessorId p);
Configuration step_fail(const Configuration& c, ProcessorId p);
Configuration step_recover(const Configuration& c,
                           RecoveryMode mode = RecoveryMode::kPurge);

struct AppliedStep {
  Configuration next;
  TraceStep record;
};

/// Dispatches to the step operations and keeps the <p, N_p, X> annotation.
/// Throws NotEnabledError if the choice is not enabled at c.
AppliedStep apply_choice(const Configuration& c, const StepChoice& choice,
                         RecoveryMode mode = RecoveryMode::kPurge);

}  // namespace absflow
