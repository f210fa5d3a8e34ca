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

#include "absflow/value.hpp"

#include <array>
#include <sstream>
#include <utility>

#include "absflow/errors.hpp"

namespace absflow {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

const std::array<std::pair<TaskFunction::Kind, const char*>, 7> kFunctionNames = {{
    {TaskFunction::Kind::kIncrementalAverage, "incremental_average"},
    {TaskFunction::Kind::kSum, "sum"},
    {TaskFunction::Kind::kCount, "count"},
    {TaskFunction::Kind::kMapAddConstant, "map_add"},
    {TaskFunction::Kind::kIdentity, "identity"},
    {TaskFunction::Kind::kFilterGreaterThan, "filter_gt"},
    {TaskFunction::Kind::kForward, "forward"},
}};

[[noreturn]] void type_mismatch(const TaskFunction& f, const Value& state,
                                const Value& input) {
  throw TypeError(function_name(f.kind) + " cannot apply to state " +
                  state.to_string() + " and input " + input.to_string());
}

}  // namespace

std::int64_t Value::as_integer() const {
  if (const auto* i = std::get_if<std::int64_t>(&v_)) return *i;
  throw TypeError("expected integer, got " + to_string());
}

const Record& Value::as_record() const {
  if (const auto* r = std::get_if<Record>(&v_)) return *r;
  throw TypeError("expected record, got " + to_string());
}

std::int64_t Value::field(const std::string& name) const {
  const Record& r = as_record();
  auto it = r.find(name);
  if (it == r.end()) throw TypeError("record " + to_string() + " has no field " + name);
  return it->second;
}

std::string Value::to_string() const {
  if (is_unit()) return "()";
  if (is_reset()) return "Reset";
  if (is_integer()) return std::to_string(as_integer());
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [name, value] : as_record()) {
    if (!first) os << ',';
    first = false;
    os << name << '=' << value;
  }
  os << '}';
  return os.str();
}

unsigned kind_of(const Value& v) {
  if (v.is_unit()) return kKindUnit;
  if (v.is_integer()) return kKindInteger;
  if (v.is_record()) return kKindRecord;
  return kKindReset;
}

std::string kinds_to_string(unsigned kinds) {
  std::string s;
  auto add = [&](unsigned bit, const char* name) {
    if ((kinds & bit) == 0) return;
    if (!s.empty()) s += '|';
    s += name;
  };
  add(kKindUnit, "unit");
  add(kKindInteger, "integer");
  add(kKindRecord, "record");
  add(kKindReset, "reset");
  return s.empty() ? "none" : s;
}

std::string function_name(TaskFunction::Kind kind) {
  for (const auto& [k, name] : kFunctionNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

bool parse_function_name(const std::string& name, TaskFunction::Kind& out) {
  for (const auto& [k, n] : kFunctionNames) {
    if (name == n) {
      out = k;
      return true;
    }
  }
  return false;
}

bool function_takes_param(TaskFunction::Kind kind) {
  return kind == TaskFunction::Kind::kMapAddConstant ||
         kind == TaskFunction::Kind::kFilterGreaterThan;
}

TaskOutput eval_task_function(const TaskFunction& f, const Value& state,
                              const Value& input) {
  using Kind = TaskFunction::Kind;
  switch (f.kind) {
    case Kind::kIncrementalAverage: {
      if (!state.is_record()) type_mismatch(f, state, input);
      if (input.is_reset()) {
        return {Value::record({{"count", 0}, {"sum", 0}}), {}};
      }
      if (!input.is_integer()) type_mismatch(f, state, input);
      const std::int64_t sum = state.field("sum") + input.as_integer();
      const std::int64_t count = state.field("count") + 1;
      return {Value::record({{"count", count}, {"sum", sum}}),
              {Value::integer(floor_div(sum, count))}};
    }
    case Kind::kSum: {
      if (!state.is_integer() || !input.is_integer()) type_mismatch(f, state, input);
      const std::int64_t total = state.as_integer() + input.as_integer();
      return {Value::integer(total), {Value::integer(total)}};
    }
    case Kind::kCount: {
      if (!state.is_integer()) type_mismatch(f, state, input);
      const std::int64_t n = state.as_integer() + 1;
      return {Value::integer(n), {Value::integer(n)}};
    }
    case Kind::kMapAddConstant:
      if (!state.is_unit() || !input.is_integer()) type_mismatch(f, state, input);
      return {state, {Value::integer(input.as_integer() + f.param)}};
    case Kind::kFilterGreaterThan:
      if (!state.is_unit() || !input.is_integer()) type_mismatch(f, state, input);
      if (input.as_integer() > f.param) return {state, {input}};
      return {state, {}};
    case Kind::kIdentity:
    case Kind::kForward:
      if (!state.is_unit()) type_mismatch(f, state, input);
      return {state, {input}};
  }
  type_mismatch(f, state, input);
}

unsigned accepted_input_kinds(const TaskFunction& f) {
  using Kind = TaskFunction::Kind;
  switch (f.kind) {
    case Kind::kIncrementalAverage:
      return kKindInteger | kKindReset;
    case Kind::kSum:
    case Kind::kMapAddConstant:
    case Kind::kFilterGreaterThan:
      return kKindInteger;
    case Kind::kCount:
    case Kind::kIdentity:
    case Kind::kForward:
      return kKindUnit | kKindInteger | kKindRecord | kKindReset;
  }
  return kKindNone;
}

unsigned output_kinds(const TaskFunction& f, unsigned input_kinds) {
  using Kind = TaskFunction::Kind;
  switch (f.kind) {
    case Kind::kIdentity:
    case Kind::kForward:
      return input_kinds;
    case Kind::kFilterGreaterThan:
      return input_kinds & kKindInteger;
    default:
      return kKindInteger;
  }
}

unsigned state_kind(const TaskFunction& f) {
  using Kind = TaskFunction::Kind;
  switch (f.kind) {
    case Kind::kIncrementalAverage:
      return kKindRecord;
    case Kind::kSum:
    case Kind::kCount:
      return kKindInteger;
    default:
      return kKindUnit;
  }
}

Value default_initial_state(const TaskFunction& f) {
  switch (state_kind(f)) {
    case kKindRecord:
      return Value::record({{"count", 0}, {"sum", 0}});
    case kKindInteger:
      return Value::integer(0);
    default:
      return Value::unit();
  }
}

std::int64_t display_scalar(const Value& v) {
  if (v.is_integer()) return v.as_integer();
  if (v.is_record()) {
    const Record& r = v.as_record();
    auto sum = r.find("sum");
    auto count = r.find("count");
    if (sum != r.end() && count != r.end()) {
      return count->second == 0 ? 0 : floor_div(sum->second, count->second);
    }
  }
  return 0;
}

}  // namespace absflow
