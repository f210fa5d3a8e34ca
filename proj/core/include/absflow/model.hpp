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

// Configurations of the stateful dataflow transition system and the pure
// functions over them: action application, gce, out, lcs and well-formedness.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "absflow/value.hpp"

namespace absflow {

using Epoch = std::uint64_t;
using SeqNo = std::uint64_t;

struct StreamName {
  std::string value;

  StreamName() = default;
  StreamName(std::string v) : value(std::move(v)) {}  // NOLINT: implicit by intent
  StreamName(const char* v) : value(v) {}             // NOLINT

  const std::string& str() const { return value; }
  auto operator<=>(const StreamName&) const = default;
  bool operator==(const StreamName&) const = default;
};

struct ProcessorId {
  std::size_t index = 0;

  auto operator<=>(const ProcessorId&) const = default;
  bool operator==(const ProcessorId&) const = default;
};

struct EventCase {
  Value payload;
  auto operator<=>(const EventCase&) const = default;
  bool operator==(const EventCase&) const = default;
};

struct BorderCase {
  auto operator<=>(const BorderCase&) const = default;
  bool operator==(const BorderCase&) const = default;
};

/// d = <e, EV<w> | BD>.
struct MessageData {
  Epoch epoch = 0;
  std::variant<EventCase, BorderCase> body;

  static MessageData event(Epoch e, Value w) { return {e, EventCase{std::move(w)}}; }
  static MessageData border(Epoch e) { return {e, BorderCase{}}; }

  bool is_border() const { return std::holds_alternative<BorderCase>(body); }
  bool is_event() const { return std::holds_alternative<EventCase>(body); }
  /// Payload of an event; throws ModelError for borders.
  const Value& payload() const;

  std::string to_string() const;

  auto operator<=>(const MessageData&) const = default;
  bool operator==(const MessageData&) const = default;
};

/// m = n s d. Ordered by stream first so per-stream lookups are range scans.
struct Message {
  SeqNo seq = 0;
  StreamName stream;
  MessageData data;

  std::weak_ordering operator<=>(const Message& o) const {
    if (auto c = stream <=> o.stream; c != 0) return c;
    if (auto c = seq <=> o.seq; c != 0) return c;
    return data <=> o.data;
  }
  bool operator==(const Message&) const = default;
};

using MessageSet = std::set<Message>;

enum class Polarity { kProduce, kConsume };

/// x = + s d | - s d.
struct Action {
  Polarity polarity = Polarity::kProduce;
  StreamName stream;
  MessageData data;

  static Action produce(StreamName s, MessageData d) {
    return {Polarity::kProduce, std::move(s), std::move(d)};
  }
  static Action consume(StreamName s, MessageData d) {
    return {Polarity::kConsume, std::move(s), std::move(d)};
  }

  auto operator<=>(const Action&) const = default;
  bool operator==(const Action&) const = default;
};

/// TK<f, S, o>.
struct TaskDef {
  std::string name;
  TaskFunction function;
  std::vector<StreamName> inputs;
  StreamName output;

  auto operator<=>(const TaskDef&) const = default;
  bool operator==(const TaskDef&) const = default;
};

/// Snapshot archive: epoch -> state at the end of that epoch.
using SnapshotArchive = std::map<Epoch, Value>;

struct NormalState {
  Epoch epoch = 1;
  Value value;
  auto operator<=>(const NormalState&) const = default;
  bool operator==(const NormalState&) const = default;
};

struct FailedState {
  auto operator<=>(const FailedState&) const = default;
  bool operator==(const FailedState&) const = default;
};

struct ProcessorState {
  SnapshotArchive archive;
  std::variant<NormalState, FailedState> volatile_state;

  bool failed() const { return std::holds_alternative<FailedState>(volatile_state); }
  /// nullptr when failed.
  const NormalState* normal() const { return std::get_if<NormalState>(&volatile_state); }

  auto operator<=>(const ProcessorState&) const = default;
  bool operator==(const ProcessorState&) const = default;
};

/// N_p: per-stream sequence numbers of one processor.
using Cursors = std::map<StreamName, SeqNo>;

/// <Pi, Sigma, N, M, D>. The task definitions and initial inputs never change
/// along an execution, so they are shared between successor configurations.
class Configuration {
 public:
  Configuration() = default;
  Configuration(std::vector<TaskDef> processors, std::vector<ProcessorState> states,
                std::vector<Cursors> cursors, MessageSet messages,
                MessageSet initial_inputs);

  const std::vector<TaskDef>& processors() const { return *processors_; }
  const MessageSet& initial_inputs() const { return *initial_inputs_; }
  std::size_t size() const { return states.size(); }

  const TaskDef& task(ProcessorId p) const;

  /// Processor that writes stream s, if any. Source streams have none.
  std::optional<ProcessorId> producer_of(const StreamName& s) const;
  /// Next sequence number the producer of s will write: the producing task's
  /// cursor, or the number of initial messages for source streams.
  SeqNo producer_cursor(const StreamName& s) const;

  std::vector<ProcessorState> states;
  std::vector<Cursors> cursors;
  MessageSet messages;

  /// Structural equality; sets compare as sets, maps as maps.
  friend bool operator==(const Configuration& a, const Configuration& b);
  friend std::weak_ordering operator<=>(const Configuration& a, const Configuration& b);

 private:
  std::shared_ptr<const std::vector<TaskDef>> processors_;
  std::shared_ptr<const MessageSet> initial_inputs_;
};

/// Action application. nullopt is "undefined": a consumption of
/// a message that is not present at the cursor.
std::optional<std::pair<Cursors, MessageSet>> apply_action(const Action& x,
                                                           const Cursors& cursors,
                                                           const MessageSet& messages);

/// Left fold of apply_action.
std::optional<std::pair<Cursors, MessageSet>> apply_actions(std::span<const Action> xs,
                                                            const Cursors& cursors,
                                                            const MessageSet& messages);

/// In-place variant; leaves the arguments in an unspecified state when it
/// returns false.
bool apply_actions_in_place(std::span<const Action> xs, Cursors& cursors,
                            MessageSet& messages);

/// M restricted to stream s.
MessageSet messages_on_stream(const MessageSet& m, const StreamName& s);
std::size_t count_on_stream(const MessageSet& m, const StreamName& s);

/// Messages with sequence number n on stream s (normally zero or one).
std::vector<const Message*> messages_at(const MessageSet& m, const StreamName& s, SeqNo n);

/// Greatest common epoch: min over processors of max(dom(archive)). Failed
/// processors count. Throws ModelError on an empty archive or no processors.
Epoch gce(const Configuration& c);

/// Messages of M with epoch <= gce(c).
MessageSet out(const Configuration& c);

/// Latest common snapshot.
Configuration lcs(const Configuration& c);

/// Well-formedness of a configuration; returns human readable violations
/// (empty when well formed).
std::vector<std::string> well_formed_violations(const Configuration& c);
bool well_formed(const Configuration& c);

std::string format_message(const Message& m);

}  // namespace absflow
