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

#include "absflow/lemmas.hpp"

#include <algorithm>
#include <exception>
#include <limits>

namespace absflow {

RunContext::RunContext(Scenario s, std::uint64_t seed, RecoveryMode mode)
    : scenario_(std::move(s)),
      seed_(seed),
      mode_(mode),
      result_(run(scenario_, mode)),
      rng_(seed * 0x9E3779B97F4A7C15ull + 1) {}

const ExplanationReport& RunContext::explanation() {
  if (!explanation_) explanation_ = construct_explanation(result_.trace, initial(), mode_);
  return *explanation_;
}

Trace epoch_sorted(const Trace& z) {
  Trace result = z;
  std::stable_sort(result.begin(), result.end(), [](const TraceStep& a, const TraceStep& b) {
    const Epoch none = std::numeric_limits<Epoch>::max();
    return step_epoch(a).value_or(none) < step_epoch(b).value_or(none);
  });
  return result;
}

std::vector<std::size_t> random_linear_extension(const Trace& z, std::mt19937_64& rng) {
  const CausalOrder order(z);
  const std::size_t n = z.size();
  std::vector<std::size_t> missing(n);
  std::vector<std::vector<std::size_t>> successors(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::size_t> preds = order.direct_predecessors(j);
    std::sort(preds.begin(), preds.end());
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    missing[j] = preds.size();
    for (std::size_t i : preds) successors[i].push_back(j);
  }
  std::vector<std::size_t> ready;
  for (std::size_t j = 0; j < n; ++j) {
    if (missing[j] == 0) ready.push_back(j);
  }
  std::vector<std::size_t> f(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t k = static_cast<std::size_t>(rng() % ready.size());
    const std::size_t j = ready[k];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(k));
    f[j] = pos;
    for (std::size_t s : successors[j]) {
      if (--missing[s] == 0) ready.insert(std::upper_bound(ready.begin(), ready.end(), s), s);
    }
  }
  return f;
}

Trace permute(const Trace& z, const std::vector<std::size_t>& f) {
  Trace result(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) result[f[i]] = z[i];
  return result;
}

namespace {

using Outcome = std::optional<std::string>;

std::string at_step(std::size_t i, const Trace& z) {
  return "step " + std::to_string(i) + " (" + format_step(z[i]) + ")";
}

bool committing(const TraceStep& s, const Configuration& before, const Configuration& after) {
  return s.is_border() && gce(after) > gce(before);
}

Outcome prefix_validity(RunContext& ctx) {
  const Trace& z = ctx.result().trace;
  const std::vector<Configuration>& cs = ctx.result().execution;
  std::vector<std::size_t> lengths{0, z.size()};
  for (int i = 0; i < 4 && !z.empty(); ++i) {
    lengths.push_back(static_cast<std::size_t>(ctx.rng()() % (z.size() + 1)));
  }
  for (std::size_t k : lengths) {
    const Trace prefix(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(k));
    TraceApplication app = apply_trace(prefix, ctx.initial(), ctx.mode());
    if (!app.valid()) return "prefix of length " + std::to_string(k) + " is not valid";
    if (!(app.configurations.back() == cs[k])) {
      return "prefix of length " + std::to_string(k) + " ends in a different configuration";
    }
  }
  return std::nullopt;
}

Outcome out_changes_only_at_committing_borders(RunContext& ctx) {
  const Trace& z = ctx.result().trace;
  const std::vector<Configuration>& cs = ctx.result().execution;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (out(cs[i]) != out(cs[i + 1]) && !committing(z[i], cs[i], cs[i + 1])) {
      return "out changed at non-committing " + at_step(i, z);
    }
  }
  return std::nullopt;
}

Outcome causal_order_respects_epochs(RunContext& ctx) {
  const Trace& z = ctx.result().trace;
  std::size_t start = 0;
  while (start < z.size()) {
    std::size_t end = start;
    while (end < z.size() && !z[end].is_recover()) ++end;
    const Trace segment(z.begin() + static_cast<std::ptrdiff_t>(start),
                        z.begin() + static_cast<std::ptrdiff_t>(end));
    const CausalOrder order(segment);
    for (std::size_t j = 0; j < segment.size(); ++j) {
      const std::optional<Epoch> ej = step_epoch(segment[j]);
      if (!ej) continue;
      for (std::size_t i = 0; i < j; ++i) {
        const std::optional<Epoch> ei = step_epoch(segment[i]);
        if (ei && *ei > *ej && order.happens_before(i, j)) {
          return at_step(start + i, z) + " happens before lower-epoch " + at_step(start + j, z);
        }
      }
    }
    start = end + 1;
  }
  return std::nullopt;
}

Outcome reordering_preserves_committed_output(RunContext& ctx) {
  const Trace& full = ctx.result().trace;
  const std::vector<Configuration>& cs = ctx.result().execution;
  std::size_t len = 0;
  while (len < full.size() && !full[len].is_recover()) ++len;
  const Trace z(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(len));

  Epoch top = 0;
  for (const TraceStep& s : z) top = std::max(top, step_epoch(s).value_or(0));
  const Epoch e = ctx.rng()() % (top + 2);

  std::vector<std::size_t> order(len);
  for (std::size_t i = 0; i < len; ++i) order[i] = i;
  std::stable_partition(order.begin(), order.end(), [&](std::size_t i) {
    const std::optional<Epoch> se = step_epoch(z[i]);
    return se && *se <= e;
  });
  std::vector<std::size_t> position(len);
  Trace reordered;
  for (std::size_t k = 0; k < len; ++k) {
    position[order[k]] = k;
    reordered.push_back(z[order[k]]);
  }
  TraceApplication app = apply_trace(reordered, ctx.initial(), ctx.mode());
  if (!app.valid()) {
    return "reordering for epoch " + std::to_string(e) + " is not valid at step " +
           std::to_string(*app.invalid_at);
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (committing(z[i], cs[i], cs[i + 1]) &&
        out(cs[i + 1]) != out(app.configurations[position[i] + 1])) {
      return "out after committing " + at_step(i, z) + " differs after reordering for epoch " +
             std::to_string(e);
    }
  }
  return std::nullopt;
}

Outcome causal_permutations_are_equivalent(RunContext& ctx) {
  const Trace& z = ctx.result().trace;
  const std::vector<std::size_t> f = random_linear_extension(z, ctx.rng());
  const Trace z2 = permute(z, f);
  if (!is_causality_preserving_permutation(z, z2, f)) {
    return std::string("sampled permutation does not preserve the causal order");
  }
  TraceApplication app = apply_trace(z2, ctx.initial(), ctx.mode());
  if (!app.valid()) {
    return "permuted trace is not valid at step " + std::to_string(*app.invalid_at);
  }
  if (!(app.configurations.back() == ctx.result().execution.back())) {
    return std::string("permuted trace ends in a different configuration");
  }
  return std::nullopt;
}

Outcome generation_joins_are_lcs(RunContext& ctx) {
  const ExplanationReport& r = ctx.explanation();
  for (std::size_t g = 0; g < r.generation_joins.size(); ++g) {
    if (!r.generation_joins[g]) {
      return "stripped generation " + std::to_string(g) +
             " does not end in the recovered configuration";
    }
  }
  return std::nullopt;
}

Outcome lcs_idempotent(RunContext& ctx) {
  const std::vector<Configuration>& cs = ctx.result().execution;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Configuration once = lcs(cs[i]);
    if (!(lcs(once) == once)) return "lcs(lcs(c)) != lcs(c) at index " + std::to_string(i);
    if (gce(once) != gce(cs[i])) return "lcs changes gce at index " + std::to_string(i);
    if (out(once) != out(cs[i])) return "lcs changes out at index " + std::to_string(i);
  }
  return std::nullopt;
}

Outcome out_monotone(RunContext& ctx) {
  const std::vector<Configuration>& cs = ctx.result().execution;
  for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
    const MessageSet a = out(cs[i]);
    const MessageSet b = out(cs[i + 1]);
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) {
      return "out shrinks at " + at_step(i, ctx.result().trace);
    }
  }
  return std::nullopt;
}

Outcome configurations_well_formed(RunContext& ctx) {
  const std::vector<Configuration>& cs = ctx.result().execution;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::vector<std::string> v = well_formed_violations(cs[i]);
    if (!v.empty()) return "configuration " + std::to_string(i) + ": " + v.front();
  }
  return std::nullopt;
}

Outcome enabledness_persists(RunContext& ctx) {
  const Trace& z = ctx.result().trace;
  const std::vector<Configuration>& cs = ctx.result().execution;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i].is_recover()) continue;
    for (const StepChoice& ch : enabled_steps(cs[i])) {
      if (ch.kind != StepChoice::Kind::kEvent && ch.kind != StepChoice::Kind::kBorder) continue;
      if (ch.processor == z[i].processor) continue;
      if (derive_step(cs[i + 1], ch) != derive_step(cs[i], ch)) {
        return ch.to_string() + " changed by " + at_step(i, z);
      }
    }
  }
  return std::nullopt;
}

Outcome explanation_verdict(RunContext& ctx) {
  const ExplanationReport& r = ctx.explanation();
  if (r.verdict) return std::nullopt;
  if (!r.explaining_valid) return std::string("explaining trace is not valid");
  if (!r.failure_free) return std::string("explaining trace has failure steps");
  return "observations differ at index " + std::to_string(r.first_mismatch().value_or(0));
}

// h is a non-decreasing witness that `ref` explains `impl` under `observe`.
template <class Observe>
bool witnesses(const std::vector<Configuration>& impl, const std::vector<Configuration>& ref,
               const std::vector<std::size_t>& h, Observe observe) {
  if (h.size() != impl.size()) return false;
  for (std::size_t m = 0; m < h.size(); ++m) {
    if (h[m] >= ref.size() || (m > 0 && h[m] < h[m - 1])) return false;
    if (!(observe(impl[m]) == observe(ref[h[m]]))) return false;
  }
  return true;
}

MessageSet observe_out(const Configuration& c) { return out(c); }
Epoch observe_max_epoch(const Configuration& c) { return max_epoch(out(c)); }

Outcome monotone_witness_exists(RunContext& ctx) {
  const ExplanationReport& r = ctx.explanation();
  const ObservationalCheck check =
      check_observational_explanation(r.original_execution, r.explaining_execution);
  if (!check.explained) return std::string("explaining execution does not explain the run");
  if (!check.mapping) return std::string("explained, but no monotone witness found");
  if (!witnesses(r.original_execution, r.explaining_execution, *check.mapping, observe_out)) {
    return std::string("returned witness is not valid");
  }
  return std::nullopt;
}

Outcome explanation_transitive(RunContext& ctx) {
  const ExplanationReport& r = ctx.explanation();
  if (!witnesses(r.original_execution, r.explaining_execution, r.mapping, observe_out)) {
    return std::string("construction mapping is not a witness");
  }
  TraceApplication sorted = apply_trace(epoch_sorted(r.explaining_trace), ctx.initial());
  if (!sorted.valid()) return std::string("epoch-sorted explanation is not valid");
  const std::vector<Configuration>& c3 = sorted.configurations;

  const ObservationalCheck second = check_observational_explanation(r.explaining_execution, c3);
  if (!second.mapping) return std::string("epoch-sorted execution does not explain the explanation");
  std::vector<std::size_t> composed(r.mapping.size());
  for (std::size_t m = 0; m < r.mapping.size(); ++m) composed[m] = (*second.mapping)[r.mapping[m]];
  if (!witnesses(r.original_execution, c3, composed, observe_out)) {
    return std::string("composed mapping is not a witness");
  }
  if (!check_observational_explanation(r.original_execution, c3).mapping) {
    return std::string("epoch-sorted execution does not explain the run directly");
  }
  return std::nullopt;
}

Outcome explanation_under_coarser_observation(RunContext& ctx) {
  const ExplanationReport& r = ctx.explanation();
  const std::span<const Configuration> impl(r.original_execution);
  const std::span<const Configuration> ref(r.explaining_execution);
  if (!check_observational_explanation(impl, ref, observe_max_epoch, observe_max_epoch).mapping) {
    return std::string("no witness under the max-epoch observation");
  }
  if (!witnesses(r.original_execution, r.explaining_execution, r.mapping, observe_max_epoch)) {
    return std::string("construction mapping is not a witness under the max-epoch observation");
  }
  return std::nullopt;
}

}  // namespace

const std::vector<Property>& property_catalog() {
  static const std::vector<Property> catalog = {
      {"prefix-validity", prefix_validity},
      {"out-changes-only-at-committing-borders", out_changes_only_at_committing_borders},
      {"causal-order-respects-epochs", causal_order_respects_epochs},
      {"reordering-preserves-committed-output", reordering_preserves_committed_output},
      {"causal-permutations-are-equivalent", causal_permutations_are_equivalent},
      {"generation-joins-are-lcs", generation_joins_are_lcs},
      {"lcs-idempotent", lcs_idempotent},
      {"out-monotone", out_monotone},
      {"configurations-well-formed", configurations_well_formed},
      {"enabledness-persists", enabledness_persists},
      {"explanation-verdict", explanation_verdict},
      {"monotone-witness-exists", monotone_witness_exists},
      {"explanation-transitive", explanation_transitive},
      {"explanation-under-coarser-observation", explanation_under_coarser_observation},
  };
  return catalog;
}

std::vector<PropertyResult> run_property_suite(const ScenarioFactory& make, std::uint64_t seed,
                                               std::size_t n) {
  const std::vector<Property>& catalog = property_catalog();
  std::vector<PropertyResult> results(catalog.size());
  for (std::size_t k = 0; k < catalog.size(); ++k) results[k].name = catalog[k].name;

  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t run_seed = seed + i;
    RunContext ctx(make(run_seed), run_seed);
    for (std::size_t k = 0; k < catalog.size(); ++k) {
      PropertyResult& res = results[k];
      if (res.failing_seed) continue;
      ++res.runs;
      Outcome outcome;
      try {
        outcome = catalog[k].check(ctx);
      } catch (const std::exception& e) {
        outcome = std::string("exception: ") + e.what();
      }
      if (outcome) {
        res.failing_seed = run_seed;
        res.detail = *outcome;
      } else {
        ++res.passed;
      }
    }
  }
  return results;
}

ScenarioFactory sampled_failures_of(const Scenario& base) {
  return [base](std::uint64_t seed) { return with_sampled_failures(base, seed); };
}

ScenarioFactory random_scenarios(const RandomScenarioOptions& options) {
  return [options](std::uint64_t seed) {
    // Decorrelate the failure schedule from the scenario shape.
    return with_sampled_failures(random_scenario(seed, options), seed ^ 0x5DEECE66Dull);
  };
}

}  // namespace absflow
