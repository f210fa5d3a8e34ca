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

// JSON scenario files.
//
//   {
//     "tasks": [{"name": "avg", "function": {"kind": "incremental_average"},
//                "inputs": ["ints", "reset"], "output": "avgs",
//                "initial_value": {"sum": 0, "count": 0}}],
//     "sources": [{"stream": "ints", "epochs": [[1], [3, 5]]},
//                 {"stream": "reset", "epochs": [[], ["Reset"]]}],
//     "failures": [{"step": 3, "task": "avg"}],
//     "policy": {"recovery_delay_max": 1, "max_steps": 100, "seed": 7}
//   }
//
// Payloads are integers, "Reset", records of integer fields, or null (unit).
// "params" holds {"k": n} for map_add and filter_gt. initial_value, failures
// and policy are optional.

#pragma once

#include <string>
#include <string_view>

#include "absflow/sim.hpp"

namespace absflow {

/// Parses and validates a scenario document. Throws ScenarioError listing
/// every problem, each prefixed with a path such as "$.tasks[0].inputs[1]".
Scenario parse_scenario(std::string_view text);

/// Reads and parses a file; unreadable files are reported as ScenarioError.
Scenario load_scenario_file(const std::string& path);

/// Serializes a scenario in the format parse_scenario reads.
std::string scenario_to_json(const Scenario& s);

}  // namespace absflow
