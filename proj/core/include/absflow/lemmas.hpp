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

// Executable properties of the model, checked on seeded runs.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "absflow/explain.hpp"
#include "absflow/sim.hpp"

namespace absflow {

/// One seeded run and the artifacts the properties share.
class RunContext {
 public:
  RunContext(Scenario s, std::uint64_t seed, RecoveryMode mode = RecoveryMode::kPurge);

  const Scenario& scenario() const { return scenario_; }
  const RunResult& result() const { return result_; }
  const Configuration& initial() const { return result_.execution.front(); }
  std::uint64_t seed() const { return seed_; }
  RecoveryMode mode() const { return mode_; }
  std::mt19937_64& rng() { return rng_; }

  /// construct_explanation of the run, computed on first use.
  const ExplanationReport& explanation();

 private:
  Scenario scenario_;
  std::uint64_t seed_;
  RecoveryMode mode_;
  RunResult result_;
  std::mt19937_64 rng_;
  std::optional<ExplanationReport> explanation_;
};

/// nullopt when the property holds, a description of the violation otherwise.
using PropertyCheck = std::function<std::optional<std::string>(RunContext&)>;

struct Property {
  std::string name;
  PropertyCheck check;
};

/// The full catalogue, in a fixed order.
const std::vector<Property>& property_catalog();

struct PropertyResult {
  std::string name;
  std::size_t runs = 0;
  std::size_t passed = 0;
  /// Seed of the first failing run, to replay it.
  std::optional<std::uint64_t> failing_seed;
  std::string detail;

  bool ok() const { return runs == passed; }
};

/// Scenario used for the run with a given seed.
using ScenarioFactory = std::function<Scenario(std::uint64_t seed)>;

/// Runs every property over n runs with seeds seed, seed + 1, ..., stopping
/// a property at its first failure.
std::vector<PropertyResult> run_property_suite(const ScenarioFactory& make, std::uint64_t seed,
                                               std::size_t n);

/// The scenario with a failure schedule of up to two failures sampled from
/// the seed.
ScenarioFactory sampled_failures_of(const Scenario& base);

/// Random scenarios (random_scenario) with sampled failures.
ScenarioFactory random_scenarios(const RandomScenarioOptions& options = {});

/// Stable sort of a trace by step epoch (Fail and Recover last).
Trace epoch_sorted(const Trace& z);

/// A random step order compatible with the causal order of z, built by
/// repeatedly placing one of the ready steps at random: result[i] is the new
/// position of step i.
std::vector<std::size_t> random_linear_extension(const Trace& z, std::mt19937_64& rng);

/// z permuted so that step i lands at position f[i].
Trace permute(const Trace& z, const std::vector<std::size_t>& f);

}  // namespace absflow
