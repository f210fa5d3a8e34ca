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

// Trace application, validity and the happens-before order on trace steps.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "absflow/model.hpp"
#include "absflow/semantics.hpp"
#include "absflow/trace_step.hpp"

namespace absflow {

/// Result of applying a trace: the execution, or the index of the first step
/// that does not apply.
struct TraceApplication {
  std::vector<Configuration> configurations;
  std::optional<std::size_t> invalid_at;

  bool valid() const { return !invalid_at.has_value(); }
};

/// Z(c). On success |configurations| = |z| + 1 and configurations[0] = c. On
/// failure `configurations` holds the prefix that did apply.
TraceApplication apply_trace(const Trace& z, const Configuration& c,
                             RecoveryMode mode = RecoveryMode::kPurge);

bool is_valid(const Trace& z, const Configuration& c,
              RecoveryMode mode = RecoveryMode::kPurge);

/// Epoch of the messages consumed by an Event or Border step; nullopt for
/// Fail and Recover.
std::optional<Epoch> step_epoch(const TraceStep& s);

/// Messages a step produces and consumes, from its recorded cursors and
/// actions.
std::vector<Message> produced_messages(const TraceStep& s);
std::vector<Message> consumed_messages(const TraceStep& s);

/// Happens-before over the steps of one trace. The transitive closure is
/// materialized at construction, O(n^2) words of memory.
class CausalOrder {
 public:
  explicit CausalOrder(const Trace& z);

  std::size_t size() const { return n_; }
  /// True iff step i happens before step j (requires i < j; false otherwise).
  bool happens_before(std::size_t i, std::size_t j) const;
  /// Direct (non-transitive) predecessors of j.
  const std::vector<std::size_t>& direct_predecessors(std::size_t j) const {
    return direct_[j];
  }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::vector<std::size_t>> direct_;
  // ancestors_[j * words_ + w]: bit i set iff i happens before j.
  std::vector<std::uint64_t> ancestors_;
};

/// Convenience form that builds the closure for a single query.
bool happens_before(const Trace& z, std::size_t i, std::size_t j);

/// z2 is the image of z under the index bijection f (z_i = z2_{f(i)}) and
/// every happens-before pair i -> j of z maps to a happens-before pair
/// f(i) -> f(j) of z2.
bool is_causality_preserving_permutation(const Trace& z, const Trace& z2,
                                         const std::vector<std::size_t>& f);

}  // namespace absflow
