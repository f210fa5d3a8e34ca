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

#pragma once

#include <compare>
#include <string>
#include <vector>

#include "absflow/model.hpp"

namespace absflow {

/// Compact record of one derivation: <rule, p, N_p, X>. Fail steps carry
/// only the processor and Recover steps nothing.
struct TraceStep {
  enum class Rule { kEvent, kBorder, kFail, kRecover };

  Rule rule = Rule::kRecover;
  ProcessorId processor;
  Cursors cursors;
  std::vector<Action> actions;

  static TraceStep event(ProcessorId p, Cursors n, std::vector<Action> x) {
    return {Rule::kEvent, p, std::move(n), std::move(x)};
  }
  static TraceStep border(ProcessorId p, Cursors n, std::vector<Action> x) {
    return {Rule::kBorder, p, std::move(n), std::move(x)};
  }
  static TraceStep fail(ProcessorId p) { return {Rule::kFail, p, {}, {}}; }
  static TraceStep recover() { return {}; }

  bool is_event() const { return rule == Rule::kEvent; }
  bool is_border() const { return rule == Rule::kBorder; }
  bool is_fail() const { return rule == Rule::kFail; }
  bool is_recover() const { return rule == Rule::kRecover; }
  /// Event and Border steps go through S-Step with actions.
  bool has_actions() const { return is_event() || is_border(); }

  auto operator<=>(const TraceStep&) const = default;
  bool operator==(const TraceStep&) const = default;
};

using Trace = std::vector<TraceStep>;

/// One line of the trace dump:
///   EVENT p=<id> epoch=<e> consume=<stream>@<n> produce=<stream>@<n>,...
///   BORDER p=<id> epoch=<e> consume=<stream>@<n>,... produce=<stream>@<n>
///   FAIL p=<id>
///   RECOVER
std::string format_step(const TraceStep& step);
/// One formatted step per line, each terminated by '\n'.
std::string dump_trace(const Trace& z);

}  // namespace absflow
