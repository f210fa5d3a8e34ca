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

#include "absflow/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "absflow/errors.hpp"

namespace absflow {

namespace {

using json = nlohmann::json;

class Reader {
 public:
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& what) {
    issues.push_back(path + ": " + what);
  }

  // Flags keys outside `allowed`.
  void known_fields(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) fail(path + "." + it.key(), "unknown field");
    }
  }

  const json* field(const json& j, const std::string& path, const char* key, bool required) {
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) fail(path + "." + key, "missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string(const json* j, const std::string& path) {
    if (j == nullptr) return std::nullopt;
    if (!j->is_string()) {
      fail(path, "expected a string");
      return std::nullopt;
    }
    return j->get<std::string>();
  }

  std::optional<std::int64_t> integer(const json* j, const std::string& path) {
    if (j == nullptr) return std::nullopt;
    if (!j->is_number_integer()) {
      fail(path, "expected an integer");
      return std::nullopt;
    }
    return j->get<std::int64_t>();
  }

  std::optional<std::uint64_t> natural(const json* j, const std::string& path) {
    if (j == nullptr) return std::nullopt;
    if (!j->is_number_unsigned() && !(j->is_number_integer() && j->get<std::int64_t>() >= 0)) {
      fail(path, "expected a non-negative integer");
      return std::nullopt;
    }
    return j->get<std::uint64_t>();
  }

  std::optional<Value> value(const json& j, const std::string& path) {
    if (j.is_null()) return Value::unit();
    if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
    if (j.is_string()) {
      if (j.get<std::string>() == "Reset") return Value::reset();
      fail(path, "unknown payload \"" + j.get<std::string>() + "\"");
      return std::nullopt;
    }
    if (j.is_object()) {
      Record r;
      bool ok = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (auto v = integer(&it.value(), path + "." + it.key())) {
          r[it.key()] = *v;
        } else {
          ok = false;
        }
      }
      if (ok) return Value::record(std::move(r));
      return std::nullopt;
    }
    fail(path, "expected an integer, \"Reset\", a record or null");
    return std::nullopt;
  }

  std::optional<TaskFunction> function(const json& j, const std::string& path) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return std::nullopt;
    }
    known_fields(j, path, {"kind", "params"});
    auto name = string(field(j, path, "kind", true), path + ".kind");
    if (!name) return std::nullopt;
    TaskFunction f;
    if (!parse_function_name(*name, f.kind)) {
      fail(path + ".kind", "unknown function \"" + *name + "\"");
      return std::nullopt;
    }
    const json* params = field(j, path, "params", false);
    if (params != nullptr && !params->is_object()) {
      fail(path + ".params", "expected an object");
      return std::nullopt;
    }
    if (function_takes_param(f.kind)) {
      if (params == nullptr) {
        fail(path + ".params.k", "missing");
        return std::nullopt;
      }
      known_fields(*params, path + ".params", {"k"});
      auto k = integer(field(*params, path + ".params", "k", true), path + ".params.k");
      if (!k) return std::nullopt;
      f.param = *k;
    } else if (params != nullptr) {
      known_fields(*params, path + ".params", {});
    }
    return f;
  }
};

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError({std::string("$: ") + e.what()});
  }

  Reader rd;
  Scenario s;
  if (!doc.is_object()) throw ScenarioError({"$: expected an object"});
  rd.known_fields(doc, "$", {"tasks", "sources", "failures", "policy"});

  if (const json* tasks = rd.field(doc, "$", "tasks", true)) {
    if (!tasks->is_array()) rd.fail("$.tasks", "expected an array");
    for (std::size_t p = 0; tasks->is_array() && p < tasks->size(); ++p) {
      const json& t = (*tasks)[p];
      const std::string path = "$.tasks[" + std::to_string(p) + "]";
      if (!t.is_object()) {
        rd.fail(path, "expected an object");
        continue;
      }
      rd.known_fields(t, path, {"name", "function", "inputs", "output", "initial_value"});
      TaskDef def;
      def.name = rd.string(rd.field(t, path, "name", true), path + ".name").value_or("");
      if (const json* f = rd.field(t, path, "function", true)) {
        if (auto fn = rd.function(*f, path + ".function")) def.function = *fn;
      }
      if (const json* ins = rd.field(t, path, "inputs", true)) {
        if (!ins->is_array()) rd.fail(path + ".inputs", "expected an array");
        for (std::size_t j = 0; ins->is_array() && j < ins->size(); ++j) {
          auto in = rd.string(&(*ins)[j], path + ".inputs[" + std::to_string(j) + "]");
          if (in) def.inputs.emplace_back(*in);
        }
      }
      def.output = rd.string(rd.field(t, path, "output", true), path + ".output").value_or("");
      Value init = default_initial_state(def.function);
      if (const json* iv = rd.field(t, path, "initial_value", false)) {
        if (auto v = rd.value(*iv, path + ".initial_value")) init = *v;
      }
      s.tasks.push_back(std::move(def));
      s.initial_values.push_back(std::move(init));
    }
  }

  if (const json* sources = rd.field(doc, "$", "sources", true)) {
    if (!sources->is_array()) rd.fail("$.sources", "expected an array");
    for (std::size_t i = 0; sources->is_array() && i < sources->size(); ++i) {
      const json& src = (*sources)[i];
      const std::string path = "$.sources[" + std::to_string(i) + "]";
      if (!src.is_object()) {
        rd.fail(path, "expected an object");
        continue;
      }
      rd.known_fields(src, path, {"stream", "epochs"});
      auto name = rd.string(rd.field(src, path, "stream", true), path + ".stream");
      std::vector<std::vector<Value>> epochs;
      if (const json* es = rd.field(src, path, "epochs", true)) {
        if (!es->is_array()) rd.fail(path + ".epochs", "expected an array of arrays");
        for (std::size_t k = 0; es->is_array() && k < es->size(); ++k) {
          const std::string epath = path + ".epochs[" + std::to_string(k) + "]";
          const json& events = (*es)[k];
          epochs.emplace_back();
          if (!events.is_array()) {
            rd.fail(epath, "expected an array");
            continue;
          }
          for (std::size_t j = 0; j < events.size(); ++j) {
            if (auto v = rd.value(events[j], epath + "[" + std::to_string(j) + "]")) {
              epochs.back().push_back(*v);
            }
          }
        }
      }
      s.sources.push_back(make_source(name.value_or(""), epochs));
    }
  }

  if (const json* failures = rd.field(doc, "$", "failures", false)) {
    if (!failures->is_array()) rd.fail("$.failures", "expected an array");
    for (std::size_t k = 0; failures->is_array() && k < failures->size(); ++k) {
      const json& f = (*failures)[k];
      const std::string path = "$.failures[" + std::to_string(k) + "]";
      if (!f.is_object()) {
        rd.fail(path, "expected an object");
        continue;
      }
      rd.known_fields(f, path, {"step", "task"});
      auto step = rd.natural(rd.field(f, path, "step", true), path + ".step");
      auto task = rd.string(rd.field(f, path, "task", true), path + ".task");
      if (!step || !task) continue;
      std::optional<std::size_t> index;
      for (std::size_t p = 0; p < s.tasks.size(); ++p) {
        if (s.tasks[p].name == *task) index = p;
      }
      if (!index) {
        rd.fail(path + ".task", "unknown task \"" + *task + "\"");
        continue;
      }
      s.failures.push_back(ScheduledFailure{static_cast<std::size_t>(*step), ProcessorId{*index}});
    }
  }

  if (const json* policy = rd.field(doc, "$", "policy", false)) {
    if (!policy->is_object()) {
      rd.fail("$.policy", "expected an object");
    } else {
      rd.known_fields(*policy, "$.policy", {"recovery_delay_max", "max_steps", "seed"});
      if (auto v = rd.natural(rd.field(*policy, "$.policy", "recovery_delay_max", false),
                              "$.policy.recovery_delay_max")) {
        s.recovery_delay_max = static_cast<std::size_t>(*v);
      }
      if (auto v = rd.natural(rd.field(*policy, "$.policy", "max_steps", false),
                              "$.policy.max_steps")) {
        s.max_steps = static_cast<std::size_t>(*v);
      }
      if (auto v = rd.natural(rd.field(*policy, "$.policy", "seed", false), "$.policy.seed")) {
        s.seed = *v;
      }
    }
  }

  if (!rd.issues.empty()) throw ScenarioError(std::move(rd.issues));
  std::vector<std::string> issues = validate_scenario(s);
  if (!issues.empty()) {
    for (std::string& i : issues) i = "$." + i;
    throw ScenarioError(std::move(issues));
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError({path + ": cannot open file"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

json value_to_json(const Value& v) {
  if (v.is_unit()) return nullptr;
  if (v.is_integer()) return v.as_integer();
  if (v.is_reset()) return "Reset";
  json r = json::object();
  for (const auto& [k, x] : v.as_record()) r[k] = x;
  return r;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json doc;
  doc["tasks"] = json::array();
  for (std::size_t p = 0; p < s.tasks.size(); ++p) {
    const TaskDef& t = s.tasks[p];
    json fn;
    fn["kind"] = function_name(t.function.kind);
    if (function_takes_param(t.function.kind)) fn["params"]["k"] = t.function.param;
    json inputs = json::array();
    for (const StreamName& in : t.inputs) inputs.push_back(in.str());
    json task;
    task["name"] = t.name;
    task["function"] = fn;
    task["inputs"] = inputs;
    task["output"] = t.output.str();
    if (p < s.initial_values.size()) task["initial_value"] = value_to_json(s.initial_values[p]);
    doc["tasks"].push_back(task);
  }
  doc["sources"] = json::array();
  for (const SourceInput& src : s.sources) {
    json epochs = json::array();
    json current = json::array();
    for (const MessageData& d : src.messages) {
      if (d.is_border()) {
        epochs.push_back(current);
        current = json::array();
      } else {
        current.push_back(value_to_json(d.payload()));
      }
    }
    doc["sources"].push_back({{"stream", src.stream.str()}, {"epochs", epochs}});
  }
  doc["failures"] = json::array();
  for (const ScheduledFailure& f : s.failures) {
    const std::string name =
        f.processor.index < s.tasks.size() ? s.tasks[f.processor.index].name : "";
    doc["failures"].push_back({{"step", f.step_index}, {"task", name}});
  }
  doc["policy"] = {{"recovery_delay_max", s.recovery_delay_max},
                   {"max_steps", s.max_steps},
                   {"seed", s.seed}};
  return doc.dump(2) + "\n";
}

}  // namespace absflow
