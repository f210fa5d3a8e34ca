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

#include "absflow/explain.hpp"

#include <algorithm>
#include <limits>

#include <nlohmann/json.hpp>

#include "absflow/errors.hpp"

namespace absflow {

namespace {

bool committed_at(const TraceStep& s, Epoch e) {
  std::optional<Epoch> epoch = step_epoch(s);
  return epoch && *epoch <= e;
}

// Positions (into g.steps) of the stable partition for boundary e.
std::vector<std::size_t> partition_order(const std::vector<TraceStep>& steps, Epoch e) {
  std::vector<std::size_t> order(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) order[i] = i;
  std::stable_partition(order.begin(), order.end(),
                        [&](std::size_t i) { return committed_at(steps[i], e); });
  return order;
}

}  // namespace

std::vector<Generation> split_generations(const Trace& z) {
  std::vector<Generation> result;
  Generation current;
  for (const TraceStep& s : z) {
    current.steps.push_back(s);
    if (s.is_recover()) {
      current.terminated_by_recover = true;
      result.push_back(std::move(current));
      current = Generation{};
    }
  }
  if (!current.steps.empty()) result.push_back(std::move(current));
  return result;
}

Generation reorder_generation(const Generation& g, Epoch e) {
  Generation result;
  result.terminated_by_recover = g.terminated_by_recover;
  result.steps.reserve(g.steps.size());
  for (std::size_t i : partition_order(g.steps, e)) result.steps.push_back(g.steps[i]);
  return result;
}

std::vector<TraceStep> strip_generation(const Generation& g, Epoch e) {
  std::vector<TraceStep> result;
  for (const TraceStep& s : g.steps) {
    if (!committed_at(s, e)) break;
    result.push_back(s);
  }
  return result;
}

std::optional<std::size_t> ExplanationReport::first_mismatch() const {
  for (std::size_t m = 0; m < per_index.size(); ++m) {
    if (!per_index[m].equal) return m;
  }
  return std::nullopt;
}

bool ExplanationReport::joins_hold() const {
  return std::all_of(generation_joins.begin(), generation_joins.end(),
                     [](bool b) { return b; });
}

std::string ExplanationReport::to_json() const {
  nlohmann::json j;
  j["original_len"] = original_trace.size();
  j["explained_len"] = explaining_trace.size();
  j["mapping"] = mapping;
  j["verdict"] = verdict;
  if (auto m = first_mismatch()) {
    j["first_mismatch"] = *m;
  } else {
    j["first_mismatch"] = nullptr;
  }
  return j.dump();
}

ExplanationReport construct_explanation(const Trace& z, const Configuration& c,
                                        RecoveryMode mode) {
  ExplanationReport report;
  report.original_trace = z;

  TraceApplication original = apply_trace(z, c, mode);
  if (!original.valid()) {
    throw InvalidTraceError(*original.invalid_at,
                            "step " + std::to_string(*original.invalid_at) +
                                " does not apply: " + format_step(z[*original.invalid_at]));
  }
  report.original_execution = std::move(original.configurations);
  const std::vector<Configuration>& cs = report.original_execution;

  std::vector<Epoch> gces(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) gces[i] = gce(cs[i]);

  // position_in_explanation[i]: index of z_i in Z', when kept.
  std::vector<std::optional<std::size_t>> position_in_explanation(z.size());
  // Z' index right after each stripped generation that ends in Recover, with
  // the configuration the recovery produced.
  std::vector<std::pair<std::size_t, Configuration>> joins;

  std::size_t start = 0;
  for (const Generation& g : split_generations(z)) {
    const std::size_t len = g.steps.size();
    Epoch boundary = std::numeric_limits<Epoch>::max();
    if (g.terminated_by_recover) {
      // Last configuration of the generation: the one the Recover step sees.
      boundary = gces[start + len - 1];
    }
    // The trailing generation was never rolled back; only its Fail steps go.
    for (std::size_t k : partition_order(g.steps, boundary)) {
      if (!committed_at(g.steps[k], boundary)) break;
      position_in_explanation[start + k] = report.explaining_trace.size();
      report.explaining_trace.push_back(g.steps[k]);
    }
    if (g.terminated_by_recover) {
      joins.emplace_back(report.explaining_trace.size(), lcs(cs[start + len - 1]));
    }
    start += len;
  }

  report.failure_free = std::none_of(
      report.explaining_trace.begin(), report.explaining_trace.end(),
      [](const TraceStep& s) { return s.is_fail() || s.is_recover(); });

  TraceApplication explained = apply_trace(report.explaining_trace, c);
  report.explaining_valid = explained.valid();
  report.explaining_execution = std::move(explained.configurations);
  const std::vector<Configuration>& cs2 = report.explaining_execution;

  for (const auto& [index, expected] : joins) {
    report.generation_joins.push_back(index < cs2.size() && cs2[index] == expected);
  }

  // h: the configuration right after the closest preceding committing border.
  report.mapping.assign(cs.size(), 0);
  std::size_t current = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i].is_border() && gces[i + 1] > gces[i] && position_in_explanation[i]) {
      current = *position_in_explanation[i] + 1;
    }
    report.mapping[i + 1] = current;
  }

  bool all_equal = true;
  report.per_index.reserve(cs.size());
  for (std::size_t m = 0; m < cs.size(); ++m) {
    IndexObservation obs;
    obs.original = out(cs[m]);
    const std::size_t h = report.mapping[m];
    if (h < cs2.size()) {
      obs.explained = out(cs2[h]);
      obs.equal = obs.original == obs.explained;
    }
    all_equal = all_equal && obs.equal;
    report.per_index.push_back(std::move(obs));
  }

  report.verdict = report.explaining_valid && report.failure_free && all_equal;
  return report;
}

ObservationalCheck check_observational_explanation(std::span<const Configuration> impl,
                                                   std::span<const Configuration> ref) {
  auto observe = [](const Configuration& c) { return out(c); };
  return check_observational_explanation(impl, ref, observe, observe);
}

bool check_failure_transparency_sample(const Configuration& initial,
                                       std::span<const Trace> traces, RecoveryMode mode) {
  for (const Trace& z : traces) {
    ExplanationReport report;
    try {
      report = construct_explanation(z, initial, mode);
    } catch (const InvalidTraceError&) {
      return false;
    }
    if (!report.verdict || !report.joins_hold()) return false;
    if (!check_observational_explanation(report.original_execution,
                                         report.explaining_execution)
             .mapping) {
      return false;
    }
  }
  return true;
}

Epoch max_epoch(const MessageSet& m) {
  Epoch e = 0;
  for (const Message& msg : m) e = std::max(e, msg.data.epoch);
  return e;
}

}  // namespace absflow
