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

// Failure-free explanations of faulty executions.
//
// A trace is cut at its Recover steps into generations. Inside a generation
// that ends in Recover, the steps of epochs above the generation's gce are
// moved behind the rest and then dropped together with the Fail and Recover
// steps; what remains is exactly the work the recovery kept. Concatenating
// the stripped generations gives a trace with no failure rules whose outputs
// match the original execution index by index through a monotone mapping.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absflow/model.hpp"
#include "absflow/semantics.hpp"
#include "absflow/trace.hpp"

namespace absflow {

struct Generation {
  std::vector<TraceStep> steps;
  bool terminated_by_recover = false;

  bool operator==(const Generation&) const = default;
};

/// Cuts z after every Recover step. Only the last generation may lack a
/// terminal Recover; an empty trace yields no generations.
std::vector<Generation> split_generations(const Trace& z);

/// Stable partition: steps with epoch <= e first, then the rest (including
/// Fail and Recover, which have no epoch).
Generation reorder_generation(const Generation& g, Epoch e);

/// The leading run of steps with epoch <= e of an already reordered
/// generation.
std::vector<TraceStep> strip_generation(const Generation& g, Epoch e);

struct IndexObservation {
  MessageSet original;
  MessageSet explained;
  bool equal = false;
};

struct ExplanationReport {
  Trace original_trace;
  Trace explaining_trace;
  std::vector<Configuration> original_execution;
  std::vector<Configuration> explaining_execution;
  /// h: configuration index of the original execution -> configuration index
  /// of the explaining execution.
  std::vector<std::size_t> mapping;
  std::vector<IndexObservation> per_index;
  bool explaining_valid = false;
  bool failure_free = false;
  /// For every generation ending in Recover: the stripped generation ends in
  /// the configuration the recovery restored.
  std::vector<bool> generation_joins;
  bool verdict = false;

  std::optional<std::size_t> first_mismatch() const;
  bool joins_hold() const;
  /// {"original_len", "explained_len", "mapping", "verdict", "first_mismatch"}.
  std::string to_json() const;
};

/// Builds the failure-free explanation of z from c and checks it. Throws
/// InvalidTraceError when z is not valid from c.
ExplanationReport construct_explanation(const Trace& z, const Configuration& c,
                                        RecoveryMode mode = RecoveryMode::kPurge);

struct ObservationalCheck {
  bool explained = false;
  /// A non-decreasing witness, when one exists.
  std::optional<std::vector<std::size_t>> mapping;
};

/// Every configuration of `impl` has an observationally equal configuration
/// in `ref`. The witness is found by a greedy left-to-right scan, which
/// finds a monotone mapping whenever one exists.
template <class ObserveImpl, class ObserveRef>
ObservationalCheck check_observational_explanation(std::span<const Configuration> impl,
                                                   std::span<const Configuration> ref,
                                                   ObserveImpl observe_impl,
                                                   ObserveRef observe_ref) {
  using Obs = decltype(observe_impl(impl[0]));
  std::vector<Obs> a;
  std::vector<decltype(observe_ref(ref[0]))> b;
  a.reserve(impl.size());
  b.reserve(ref.size());
  for (const Configuration& c : impl) a.push_back(observe_impl(c));
  for (const Configuration& c : ref) b.push_back(observe_ref(c));

  ObservationalCheck result;
  result.explained = true;
  for (const auto& o : a) {
    bool found = false;
    for (const auto& p : b) {
      if (o == p) {
        found = true;
        break;
      }
    }
    if (!found) {
      result.explained = false;
      return result;
    }
  }

  std::vector<std::size_t> h;
  h.reserve(a.size());
  std::size_t j = 0;
  for (const auto& o : a) {
    while (j < b.size() && !(o == b[j])) ++j;
    if (j == b.size()) return result;
    h.push_back(j);
  }
  result.mapping = std::move(h);
  return result;
}

/// Both sides observed through out.
ObservationalCheck check_observational_explanation(std::span<const Configuration> impl,
                                                   std::span<const Configuration> ref);

/// Every trace (valid from `initial`) has a failure-free execution from the
/// same initial configuration that monotonically explains it under out.
bool check_failure_transparency_sample(const Configuration& initial,
                                       std::span<const Trace> traces,
                                       RecoveryMode mode = RecoveryMode::kPurge);

/// Largest epoch present in a set of messages (0 when empty); a coarser
/// observation layered on top of out.
Epoch max_epoch(const MessageSet& m);

}  // namespace absflow
