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

#pragma once

#include <string>

#include "absflow/sim.hpp"

namespace absflow::testing {

inline std::string scenario_path(const std::string& name) {
  return std::string(ABSFLOW_SCENARIO_DIR) + "/" + name;
}

/// One incremental-average task over "ints" and "reset".
inline Scenario average_scenario() {
  Scenario s;
  TaskDef t;
  t.name = "avg";
  t.function = TaskFunction::incremental_average();
  t.inputs = {"ints", "reset"};
  t.output = "avgs";
  s.tasks.push_back(t);
  s.initial_values.push_back(Value::record({{"sum", 0}, {"count", 0}}));
  s.sources.push_back(make_source("ints", {{Value::integer(1)}, {Value::integer(3), Value::integer(5)}}));
  s.sources.push_back(make_source("reset", {{}, {Value::reset()}}));
  s.recovery_delay_max = 1;
  s.max_steps = 100;
  return s;
}

/// in -> p1 (map_add 1) -> p2 (sum), with the given epochs on "in".
inline Scenario pipeline_scenario(const std::vector<std::vector<Value>>& epochs) {
  Scenario s;
  s.tasks.push_back(TaskDef{"p1", TaskFunction::map_add(1), {"in"}, "mid"});
  s.tasks.push_back(TaskDef{"p2", TaskFunction::sum(), {"mid"}, "out"});
  s.initial_values = {Value::unit(), Value::integer(0)};
  s.sources.push_back(make_source("in", epochs));
  s.max_steps = 100;
  return s;
}

/// One sum task over "in".
inline Scenario sum_scenario(const std::vector<std::vector<Value>>& epochs) {
  Scenario s;
  s.tasks.push_back(TaskDef{"acc", TaskFunction::sum(), {"in"}, "totals"});
  s.initial_values = {Value::integer(0)};
  s.sources.push_back(make_source("in", epochs));
  s.max_steps = 100;
  return s;
}

inline Value I(std::int64_t i) { return Value::integer(i); }

}  // namespace absflow::testing
