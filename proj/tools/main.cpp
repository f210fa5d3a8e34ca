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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace absflow::cli;

  CLI::App app{"absflow: epoch-snapshot dataflow model, simulator and checkers"};
  app.require_subcommand(1);

  std::string file;
  std::optional<std::uint64_t> run_seed;
  auto* run = app.add_subcommand("run", "Run a scenario and print its trace and final out");
  run->add_option("file", file, "Scenario file")->required();
  run->add_option("--seed", run_seed, "Override the scenario seed");

  FtOptions ft;
  bool exhaustive = false;
  bool mutate = false;
  auto* check_ft = app.add_subcommand("check-ft", "Check failure transparency");
  check_ft->add_option("file", file, "Scenario file")->required();
  auto* random_opt = check_ft->add_option("--random", ft.runs, "Number of seeded random runs");
  auto* seed_opt = check_ft->add_option("--seed", ft.seed, "First seed of the random runs");
  auto* exhaustive_opt =
      check_ft->add_flag("--exhaustive", exhaustive, "Check every execution up to --depth");
  auto* depth_opt = check_ft->add_option("--depth", ft.depth, "Maximum trace length");
  auto* budget_opt = check_ft->add_option("--budget", ft.budget, "Maximum number of failures");
  check_ft->add_flag("--mutate-skip-purge", mutate)->group("");
  random_opt->excludes(exhaustive_opt);
  seed_opt->needs(random_opt);
  depth_opt->needs(exhaustive_opt);
  budget_opt->needs(exhaustive_opt);

  auto* liveness = app.add_subcommand("check-liveness", "Check liveness under a fair scheduler");
  liveness->add_option("file", file, "Scenario file")->required();

  std::size_t lemma_runs = 200;
  std::uint64_t lemma_seed = 0;
  auto* lemmas = app.add_subcommand("lemmas", "Run the property suite on seeded runs");
  lemmas->add_option("file", file, "Scenario file")->required();
  lemmas->add_option("--n", lemma_runs, "Number of runs")->required();
  lemmas->add_option("--seed", lemma_seed, "First seed")->required();

  std::size_t enum_depth = 0;
  std::size_t enum_budget = 0;
  bool enum_dump = false;
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate every execution up to a depth");
  enumerate->add_option("file", file, "Scenario file")->required();
  enumerate->add_option("--depth", enum_depth, "Maximum trace length")->required();
  enumerate->add_option("--budget", enum_budget, "Maximum number of failures")->required();
  enumerate->add_flag("--dump", enum_dump, "Print every trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (run->parsed()) return cmd_run(file, run_seed, std::cout, std::cerr);
  if (check_ft->parsed()) {
    if (exhaustive) {
      if (depth_opt->count() == 0 || budget_opt->count() == 0) {
        std::cerr << "error: --exhaustive needs --depth and --budget\n";
        return kExitInput;
      }
      ft.mode = FtOptions::Mode::kExhaustive;
    } else if (random_opt->count() == 0 || seed_opt->count() == 0) {
      std::cerr << "error: give either --random N --seed S or --exhaustive --depth D --budget B\n";
      return kExitInput;
    }
    if (mutate) ft.engine = absflow::RecoveryMode::kSkipMessagePurge;
    return cmd_check_ft(file, ft, std::cout, std::cerr);
  }
  if (liveness->parsed()) return cmd_check_liveness(file, std::cout, std::cerr);
  if (lemmas->parsed()) return cmd_lemmas(file, lemma_runs, lemma_seed, std::cout, std::cerr);
  if (enumerate->parsed()) {
    return cmd_enumerate(file, enum_depth, enum_budget, enum_dump, std::cout, std::cerr);
  }
  return kExitInternal;
}
