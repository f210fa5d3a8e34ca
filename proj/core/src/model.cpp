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

#include "absflow/model.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "absflow/errors.hpp"

namespace absflow {

const Value& MessageData::payload() const {
  if (const auto* ev = std::get_if<EventCase>(&body)) return ev->payload;
  throw ModelError("border message carries no payload");
}

std::string MessageData::to_string() const {
  std::ostringstream os;
  os << '<' << epoch << ", ";
  if (is_border()) {
    os << "BD";
  } else {
    os << "EV<" << payload().to_string() << '>';
  }
  os << '>';
  return os.str();
}

Configuration::Configuration(std::vector<TaskDef> processors,
                             std::vector<ProcessorState> states_in,
                             std::vector<Cursors> cursors_in, MessageSet messages_in,
                             MessageSet initial_inputs)
    : states(std::move(states_in)),
      cursors(std::move(cursors_in)),
      messages(std::move(messages_in)),
      processors_(std::make_shared<const std::vector<TaskDef>>(std::move(processors))),
      initial_inputs_(std::make_shared<const MessageSet>(std::move(initial_inputs))) {}

const TaskDef& Configuration::task(ProcessorId p) const {
  if (!processors_ || p.index >= processors_->size()) {
    throw ModelError("unknown processor " + std::to_string(p.index));
  }
  return (*processors_)[p.index];
}

std::optional<ProcessorId> Configuration::producer_of(const StreamName& s) const {
  if (!processors_) return std::nullopt;
  for (std::size_t p = 0; p < processors_->size(); ++p) {
    if ((*processors_)[p].output == s) return ProcessorId{p};
  }
  return std::nullopt;
}

SeqNo Configuration::producer_cursor(const StreamName& s) const {
  if (auto p = producer_of(s)) {
    const Cursors& n = cursors.at(p->index);
    auto it = n.find(s);
    return it == n.end() ? 0 : it->second;
  }
  return count_on_stream(initial_inputs(), s);
}

namespace {

template <class T>
std::weak_ordering deep_compare(const std::shared_ptr<const T>& a,
                                const std::shared_ptr<const T>& b) {
  if (a == b) return std::weak_ordering::equivalent;
  if (!a) return std::weak_ordering::less;
  if (!b) return std::weak_ordering::greater;
  return std::compare_weak_order_fallback(*a, *b);
}

}  // namespace

bool operator==(const Configuration& a, const Configuration& b) {
  return (a <=> b) == 0;
}

std::weak_ordering operator<=>(const Configuration& a, const Configuration& b) {
  if (auto c = deep_compare(a.processors_, b.processors_); c != 0) return c;
  if (auto c = std::compare_weak_order_fallback(a.states, b.states); c != 0) return c;
  if (auto c = std::compare_weak_order_fallback(a.cursors, b.cursors); c != 0) return c;
  if (auto c = std::compare_weak_order_fallback(a.messages, b.messages); c != 0) return c;
  return deep_compare(a.initial_inputs_, b.initial_inputs_);
}

bool apply_actions_in_place(std::span<const Action> xs, Cursors& cursors,
                            MessageSet& messages) {
  for (const Action& x : xs) {
    SeqNo& n = cursors[x.stream];
    Message m{n, x.stream, x.data};
    if (x.polarity == Polarity::kProduce) {
      messages.insert(std::move(m));
    } else if (!messages.contains(m)) {
      return false;
    }
    ++n;
  }
  return true;
}

std::optional<std::pair<Cursors, MessageSet>> apply_action(const Action& x,
                                                           const Cursors& cursors,
                                                           const MessageSet& messages) {
  return apply_actions(std::span<const Action>(&x, 1), cursors, messages);
}

std::optional<std::pair<Cursors, MessageSet>> apply_actions(std::span<const Action> xs,
                                                            const Cursors& cursors,
                                                            const MessageSet& messages) {
  std::pair<Cursors, MessageSet> result{cursors, messages};
  if (!apply_actions_in_place(xs, result.first, result.second)) return std::nullopt;
  return result;
}

namespace {

// First message of stream s in set order; streams sort before seq.
MessageSet::const_iterator stream_begin(const MessageSet& m, const StreamName& s) {
  return m.lower_bound(Message{0, s, MessageData{0, EventCase{}}});
}

}  // namespace

MessageSet messages_on_stream(const MessageSet& m, const StreamName& s) {
  MessageSet result;
  for (auto it = stream_begin(m, s); it != m.end() && it->stream == s; ++it) {
    result.insert(result.end(), *it);
  }
  return result;
}

std::size_t count_on_stream(const MessageSet& m, const StreamName& s) {
  std::size_t n = 0;
  for (auto it = stream_begin(m, s); it != m.end() && it->stream == s; ++it) ++n;
  return n;
}

std::vector<const Message*> messages_at(const MessageSet& m, const StreamName& s,
                                        SeqNo n) {
  std::vector<const Message*> result;
  for (auto it = m.lower_bound(Message{n, s, MessageData{0, EventCase{}}});
       it != m.end() && it->stream == s && it->seq == n; ++it) {
    result.push_back(&*it);
  }
  return result;
}

Epoch gce(const Configuration& c) {
  if (c.states.empty()) throw ModelError("gce of a configuration without processors");
  Epoch result = std::numeric_limits<Epoch>::max();
  for (std::size_t p = 0; p < c.states.size(); ++p) {
    const SnapshotArchive& a = c.states[p].archive;
    if (a.empty()) {
      throw ModelError("processor " + std::to_string(p) + " has an empty snapshot archive");
    }
    result = std::min(result, a.rbegin()->first);
  }
  return result;
}

MessageSet out(const Configuration& c) {
  const Epoch g = gce(c);
  MessageSet result;
  for (const Message& m : c.messages) {
    if (m.data.epoch <= g) result.insert(result.end(), m);
  }
  return result;
}

Configuration lcs(const Configuration& c) {
  const Epoch g = gce(c);
  MessageSet committed = out(c);

  Configuration next = c;
  for (std::size_t p = 0; p < c.states.size(); ++p) {
    const SnapshotArchive& a = c.states[p].archive;
    auto snap = a.find(g);
    if (snap == a.end()) {
      throw ModelError("processor " + std::to_string(p) + " has no snapshot for epoch " +
                       std::to_string(g));
    }
    ProcessorState restored;
    restored.archive = SnapshotArchive(a.begin(), std::next(snap));
    restored.volatile_state = NormalState{g + 1, snap->second};
    next.states[p] = std::move(restored);

    for (auto& [stream, n] : next.cursors[p]) n = count_on_stream(committed, stream);
  }

  MessageSet messages = c.initial_inputs();
  messages.insert(committed.begin(), committed.end());
  next.messages = std::move(messages);
  return next;
}

std::vector<std::string> well_formed_violations(const Configuration& c) {
  std::vector<std::string> issues;
  auto fail = [&](std::string msg) { issues.push_back(std::move(msg)); };

  const auto& tasks = c.processors();
  if (tasks.size() != c.states.size() || tasks.size() != c.cursors.size()) {
    fail("|Pi|, |Sigma| and |N| differ");
    return issues;
  }

  std::set<StreamName> streams;
  for (const Message& m : c.initial_inputs()) streams.insert(m.stream);
  for (const TaskDef& t : tasks) {
    streams.insert(t.output);
    for (const auto& s : t.inputs) streams.insert(s);
  }
  for (const Message& m : c.messages) {
    if (!streams.contains(m.stream)) fail("message on unknown stream " + m.stream.str());
  }

  // Stream contents: contiguous sequence numbers, epochs separated by borders.
  for (const StreamName& s : streams) {
    const SeqNo produced = c.producer_cursor(s);
    SeqNo expected = 0;
    Epoch epoch = 1;
    bool ok = true;
    for (auto it = stream_begin(c.messages, s); it != c.messages.end() && it->stream == s;
         ++it) {
      if (it->seq != expected) {
        fail("stream " + s.str() + ": sequence number " + std::to_string(it->seq) +
             " where " + std::to_string(expected) + " expected");
        ok = false;
        break;
      }
      if (it->data.epoch != epoch) {
        fail("stream " + s.str() + ": message " + std::to_string(it->seq) + " has epoch " +
             std::to_string(it->data.epoch) + ", expected " + std::to_string(epoch));
        ok = false;
        break;
      }
      if (it->data.is_border()) ++epoch;
      ++expected;
    }
    if (ok && expected != produced) {
      fail("stream " + s.str() + " holds " + std::to_string(expected) +
           " messages but its producer cursor is " + std::to_string(produced));
    }
  }

  for (std::size_t p = 0; p < tasks.size(); ++p) {
    const std::string who = "processor " + std::to_string(p);
    const TaskDef& t = tasks[p];
    const ProcessorState& st = c.states[p];
    const Cursors& n = c.cursors[p];

    std::set<StreamName> dom(t.inputs.begin(), t.inputs.end());
    dom.insert(t.output);
    std::set<StreamName> actual;
    for (const auto& [s, _] : n) actual.insert(s);
    if (dom != actual) fail(who + ": cursor domain differs from inputs and output");

    if (st.archive.empty()) {
      fail(who + ": empty snapshot archive");
      continue;
    }
    Epoch next_key = 0;
    for (const auto& [e, _] : st.archive) {
      if (e != next_key) {
        fail(who + ": archive is not contiguous from 0");
        break;
      }
      ++next_key;
    }
    const Epoch last = st.archive.rbegin()->first;
    if (const NormalState* ns = st.normal()) {
      if (ns->epoch != last + 1) {
        fail(who + ": volatile epoch " + std::to_string(ns->epoch) +
             " does not follow archive epoch " + std::to_string(last));
      }
    }

    // Every stream touched by p has seen exactly `last` borders below its cursor.
    for (const auto& [s, cursor] : n) {
      if (cursor > c.producer_cursor(s)) {
        fail(who + ": cursor on " + s.str() + " is past the producer cursor");
        continue;
      }
      Epoch borders = 0;
      for (auto it = stream_begin(c.messages, s);
           it != c.messages.end() && it->stream == s && it->seq < cursor; ++it) {
        if (it->data.is_border()) ++borders;
      }
      if (borders != last) {
        fail(who + ": " + std::to_string(borders) + " borders below cursor on " + s.str() +
             ", archive ends at epoch " + std::to_string(last));
      }
    }
  }
  return issues;
}

bool well_formed(const Configuration& c) { return well_formed_violations(c).empty(); }

std::string format_message(const Message& m) {
  std::ostringstream os;
  os << m.stream.str() << " seq=" << m.seq << " epoch=" << m.data.epoch << ' ';
  if (m.data.is_border()) {
    os << "BD";
  } else {
    os << m.data.payload().to_string();
  }
  return os.str();
}

}  // namespace absflow
