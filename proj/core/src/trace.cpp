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

#include "absflow/trace.hpp"

#include <map>
#include <sstream>

namespace absflow {

namespace {

std::vector<Message> messages_of(const TraceStep& s, Polarity polarity) {
  std::vector<Message> result;
  if (!s.has_actions()) return result;
  Cursors n = s.cursors;
  for (const Action& x : s.actions) {
    SeqNo& seq = n[x.stream];
    if (x.polarity == polarity) result.push_back(Message{seq, x.stream, x.data});
    ++seq;
  }
  return result;
}

void append_positions(std::ostringstream& os, const TraceStep& s, Polarity polarity) {
  bool first = true;
  for (const Message& m : messages_of(s, polarity)) {
    if (!first) os << ',';
    first = false;
    os << m.stream.str() << '@' << m.seq;
  }
}

}  // namespace

std::string format_step(const TraceStep& step) {
  std::ostringstream os;
  switch (step.rule) {
    case TraceStep::Rule::kEvent:
    case TraceStep::Rule::kBorder:
      os << (step.is_event() ? "EVENT" : "BORDER") << " p=" << step.processor.index
         << " epoch=";
      if (auto e = step_epoch(step)) {
        os << *e;
      } else {
        os << '?';
      }
      os << " consume=";
      append_positions(os, step, Polarity::kConsume);
      os << " produce=";
      append_positions(os, step, Polarity::kProduce);
      break;
    case TraceStep::Rule::kFail:
      os << "FAIL p=" << step.processor.index;
      break;
    case TraceStep::Rule::kRecover:
      os << "RECOVER";
      break;
  }
  return os.str();
}

std::string dump_trace(const Trace& z) {
  std::string s;
  for (const TraceStep& step : z) {
    s += format_step(step);
    s += '\n';
  }
  return s;
}

TraceApplication apply_trace(const Trace& z, const Configuration& c, RecoveryMode mode) {
  TraceApplication result;
  result.configurations.reserve(z.size() + 1);
  result.configurations.push_back(c);
  for (std::size_t i = 0; i < z.size(); ++i) {
    std::optional<Configuration> next = apply_step(result.configurations.back(), z[i], mode);
    if (!next) {
      result.invalid_at = i;
      return result;
    }
    result.configurations.push_back(std::move(*next));
  }
  return result;
}

bool is_valid(const Trace& z, const Configuration& c, RecoveryMode mode) {
  Configuration current = c;
  for (const TraceStep& step : z) {
    std::optional<Configuration> next = apply_step(current, step, mode);
    if (!next) return false;
    current = std::move(*next);
  }
  return true;
}

std::optional<Epoch> step_epoch(const TraceStep& s) {
  if (!s.has_actions()) return std::nullopt;
  for (const Action& x : s.actions) {
    if (x.polarity == Polarity::kConsume) return x.data.epoch;
  }
  return std::nullopt;
}

std::vector<Message> produced_messages(const TraceStep& s) {
  return messages_of(s, Polarity::kProduce);
}

std::vector<Message> consumed_messages(const TraceStep& s) {
  return messages_of(s, Polarity::kConsume);
}

CausalOrder::CausalOrder(const Trace& z)
    : n_(z.size()), words_((z.size() + 63) / 64), direct_(z.size()) {
  std::map<Message, std::vector<std::size_t>> producers;
  std::optional<std::size_t> last_recover;
  std::map<std::size_t, std::size_t> last_step_of;

  for (std::size_t j = 0; j < n_; ++j) {
    const TraceStep& s = z[j];
    std::vector<std::size_t>& preds = direct_[j];
    if (s.is_recover()) {
      // Recover steps are ordered after everything before them.
      for (std::size_t i = 0; i < j; ++i) preds.push_back(i);
    } else {
      if (last_recover) preds.push_back(*last_recover);
      // Same processor: the latest earlier step suffices, closure does the rest.
      if (auto it = last_step_of.find(s.processor.index); it != last_step_of.end()) {
        preds.push_back(it->second);
      }
      if (s.has_actions()) {
        for (const Message& m : consumed_messages(s)) {
          if (auto it = producers.find(m); it != producers.end()) {
            for (std::size_t i : it->second) preds.push_back(i);
          }
        }
      }
    }

    if (s.is_recover()) {
      last_recover = j;
    } else {
      last_step_of[s.processor.index] = j;
      for (const Message& m : produced_messages(s)) producers[m].push_back(j);
    }
  }

  ancestors_.assign(n_ * words_, 0);
  for (std::size_t j = 0; j < n_; ++j) {
    std::uint64_t* row = &ancestors_[j * words_];
    for (std::size_t i : direct_[j]) {
      row[i / 64] |= std::uint64_t{1} << (i % 64);
      const std::uint64_t* pred_row = &ancestors_[i * words_];
      for (std::size_t w = 0; w < words_; ++w) row[w] |= pred_row[w];
    }
  }
}

bool CausalOrder::happens_before(std::size_t i, std::size_t j) const {
  if (i >= j || j >= n_) return false;
  return (ancestors_[j * words_ + i / 64] >> (i % 64)) & 1u;
}

bool happens_before(const Trace& z, std::size_t i, std::size_t j) {
  return CausalOrder(z).happens_before(i, j);
}

bool is_causality_preserving_permutation(const Trace& z, const Trace& z2,
                                         const std::vector<std::size_t>& f) {
  const std::size_t n = z.size();
  if (z2.size() != n || f.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (f[i] >= n || hit[f[i]]) return false;
    hit[f[i]] = true;
    if (!(z[i] == z2[f[i]])) return false;
  }
  const CausalOrder before(z);
  const CausalOrder after(z2);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (before.happens_before(i, j) && !after.happens_before(f[i], f[j])) return false;
    }
  }
  return true;
}

}  // namespace absflow
