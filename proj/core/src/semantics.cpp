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

#include <algorithm>
#include <sstream>

#include "absflow/errors.hpp"

namespace absflow {

std::string StepChoice::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kEvent:
      os << "Event(p=" << processor.index << ", j=" << input_index << ')';
      break;
    case Kind::kBorder:
      os << "Border(p=" << processor.index << ')';
      break;
    case Kind::kFail:
      os << "Fail(p=" << processor.index << ')';
      break;
    case Kind::kRecover:
      os << "Recover";
      break;
  }
  return os.str();
}

namespace {

bool any_failed(const Configuration& c) {
  return std::any_of(c.states.begin(), c.states.end(),
                     [](const ProcessorState& s) { return s.failed(); });
}

SeqNo cursor_of(const Cursors& n, const StreamName& s) {
  auto it = n.find(s);
  return it == n.end() ? 0 : it->second;
}

std::optional<TraceStep> derive_event(const Configuration& c, ProcessorId p,
                                      std::size_t j) {
  const TaskDef& task = c.task(p);
  if (j >= task.inputs.size()) return std::nullopt;
  const NormalState* ns = c.states[p.index].normal();
  if (ns == nullptr) return std::nullopt;

  const StreamName& s = task.inputs[j];
  const Cursors& n = c.cursors[p.index];
  const Message* next = nullptr;
  for (const Message* m : messages_at(c.messages, s, cursor_of(n, s))) {
    if (m->data.is_event() && m->data.epoch == ns->epoch) {
      next = m;
      break;
    }
  }
  if (next == nullptr) return std::nullopt;

  TaskOutput result = eval_task_function(task.function, ns->value, next->data.payload());
  std::vector<Action> x;
  x.reserve(1 + result.outputs.size());
  x.push_back(Action::consume(s, next->data));
  for (Value& w : result.outputs) {
    x.push_back(Action::produce(task.output, MessageData::event(ns->epoch, std::move(w))));
  }
  return TraceStep::event(p, n, std::move(x));
}

std::optional<TraceStep> derive_border(const Configuration& c, ProcessorId p) {
  const TaskDef& task = c.task(p);
  const NormalState* ns = c.states[p.index].normal();
  if (ns == nullptr) return std::nullopt;

  const Cursors& n = c.cursors[p.index];
  const MessageData bd = MessageData::border(ns->epoch);
  std::vector<Action> x;
  x.reserve(task.inputs.size() + 1);
  for (const StreamName& s : task.inputs) {
    if (!c.messages.contains(Message{cursor_of(n, s), s, bd})) return std::nullopt;
    x.push_back(Action::consume(s, bd));
  }
  x.push_back(Action::produce(task.output, bd));
  return TraceStep::border(p, n, std::move(x));
}

// Applies the recorded actions of an Event/Border step to processor p of
// `next`, checking the recorded cursors first.
bool apply_recorded_actions(Configuration& next, const TraceStep& step) {
  Cursors& n = next.cursors[step.processor.index];
  if (n != step.cursors) return false;
  return apply_actions_in_place(step.actions, n, next.messages);
}

std::optional<Configuration> apply_event(const Configuration& c, const TraceStep& step) {
  const TaskDef& task = c.task(step.processor);
  const NormalState* ns = c.states[step.processor.index].normal();
  if (ns == nullptr || step.actions.empty()) return std::nullopt;

  const Action& consumed = step.actions.front();
  if (consumed.polarity != Polarity::kConsume || !consumed.data.is_event() ||
      consumed.data.epoch != ns->epoch ||
      std::find(task.inputs.begin(), task.inputs.end(), consumed.stream) ==
          task.inputs.end()) {
    return std::nullopt;
  }

  TaskOutput result =
      eval_task_function(task.function, ns->value, consumed.data.payload());
  if (step.actions.size() != 1 + result.outputs.size()) return std::nullopt;
  for (std::size_t i = 0; i < result.outputs.size(); ++i) {
    const Action expected =
        Action::produce(task.output, MessageData::event(ns->epoch, result.outputs[i]));
    if (step.actions[1 + i] != expected) return std::nullopt;
  }

  Configuration next = c;
  if (!apply_recorded_actions(next, step)) return std::nullopt;
  next.states[step.processor.index].volatile_state =
      NormalState{ns->epoch, std::move(result.state)};
  return next;
}

std::optional<Configuration> apply_border(const Configuration& c, const TraceStep& step) {
  const TaskDef& task = c.task(step.processor);
  const NormalState* ns = c.states[step.processor.index].normal();
  if (ns == nullptr || step.actions.size() != task.inputs.size() + 1) return std::nullopt;

  const MessageData bd = MessageData::border(ns->epoch);
  for (std::size_t i = 0; i < task.inputs.size(); ++i) {
    if (step.actions[i] != Action::consume(task.inputs[i], bd)) return std::nullopt;
  }
  if (step.actions.back() != Action::produce(task.output, bd)) return std::nullopt;

  Configuration next = c;
  if (!apply_recorded_actions(next, step)) return std::nullopt;
  ProcessorState& st = next.states[step.processor.index];
  const Epoch e = ns->epoch;
  Value v = ns->value;
  st.archive[e] = v;
  st.volatile_state = NormalState{e + 1, std::move(v)};
  return next;
}

Configuration recover(const Configuration& c, RecoveryMode mode) {
  Configuration next = lcs(c);
  if (mode == RecoveryMode::kSkipMessagePurge) next.messages = c.messages;
  return next;
}

}  // namespace

std::optional<TraceStep> derive_step(const Configuration& c, const StepChoice& choice) {
  if (choice.kind != StepChoice::Kind::kRecover && choice.processor.index >= c.size()) {
    return std::nullopt;
  }
  switch (choice.kind) {
    case StepChoice::Kind::kEvent:
      return derive_event(c, choice.processor, choice.input_index);
    case StepChoice::Kind::kBorder:
      return derive_border(c, choice.processor);
    case StepChoice::Kind::kFail:
      return TraceStep::fail(choice.processor);
    case StepChoice::Kind::kRecover:
      if (!any_failed(c)) return std::nullopt;
      return TraceStep::recover();
  }
  return std::nullopt;
}

std::optional<Configuration> apply_step(const Configuration& c, const TraceStep& step,
                                        RecoveryMode mode) {
  if (step.rule != TraceStep::Rule::kRecover && step.processor.index >= c.size()) {
    return std::nullopt;
  }
  switch (step.rule) {
    case TraceStep::Rule::kEvent:
      return apply_event(c, step);
    case TraceStep::Rule::kBorder:
      return apply_border(c, step);
    case TraceStep::Rule::kFail: {
      Configuration next = c;
      next.states[step.processor.index].volatile_state = FailedState{};
      return next;
    }
    case TraceStep::Rule::kRecover:
      if (!any_failed(c)) return std::nullopt;
      return recover(c, mode);
  }
  return std::nullopt;
}

std::vector<StepChoice> enabled_steps(const Configuration& c) {
  std::vector<StepChoice> result;
  for (std::size_t p = 0; p < c.size(); ++p) {
    const ProcessorId id{p};
    for (std::size_t j = 0; j < c.task(id).inputs.size(); ++j) {
      if (derive_event(c, id, j)) result.push_back(StepChoice::event(id, j));
    }
    if (derive_border(c, id)) result.push_back(StepChoice::border(id));
    result.push_back(StepChoice::fail(id));
  }
  if (any_failed(c)) result.push_back(StepChoice::recover());
  return result;
}

AppliedStep apply_choice(const Configuration& c, const StepChoice& choice,
                         RecoveryMode mode) {
  std::optional<TraceStep> record = derive_step(c, choice);
  if (!record) throw NotEnabledError(choice.to_string() + " is not enabled");
  std::optional<Configuration> next = apply_step(c, *record, mode);
  if (!next) throw NotEnabledError(choice.to_string() + " is not applicable");
  return {std::move(*next), std::move(*record)};
}

Configuration step_event(const Configuration& c, ProcessorId p, std::size_t j) {
  return apply_choice(c, StepChoice::event(p, j)).next;
}

Configuration step_border(const Configuration& c, ProcessorId p) {
  return apply_choice(c, StepChoice::border(p)).next;
}

Configuration step_fail(const Configuration& c, ProcessorId p) {
  return apply_choice(c, StepChoice::fail(p)).next;
}

Configuration step_recover(const Configuration& c, RecoveryMode mode) {
  return apply_choice(c, StepChoice::recover(), mode).next;
}

}  // namespace absflow
