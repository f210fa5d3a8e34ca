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

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace absflow {

struct UnitTag {
  auto operator<=>(const UnitTag&) const = default;
};

struct ResetTag {
  auto operator<=>(const ResetTag&) const = default;
};

using Record = std::map<std::string, std::int64_t>;

/// Payloads and task states. Everything is integer-valued so that runs are
/// exactly reproducible.
class Value {
 public:
  Value() = default;

  static Value unit() { return Value(UnitTag{}); }
  static Value integer(std::int64_t i) { return Value(i); }
  static Value record(Record fields) { return Value(std::move(fields)); }
  static Value reset() { return Value(ResetTag{}); }

  bool is_unit() const { return std::holds_alternative<UnitTag>(v_); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_record() const { return std::holds_alternative<Record>(v_); }
  bool is_reset() const { return std::holds_alternative<ResetTag>(v_); }

  std::int64_t as_integer() const;
  const Record& as_record() const;
  /// Looks up a named field of a record value.
  std::int64_t field(const std::string& name) const;

  std::string to_string() const;

  auto operator<=>(const Value&) const = default;
  bool operator==(const Value&) const = default;

 private:
  using Storage = std::variant<UnitTag, std::int64_t, Record, ResetTag>;
  explicit Value(Storage v) : v_(std::move(v)) {}

  Storage v_;
};

/// Bitmask of value shapes a stream may carry; used to type-check a task graph
/// before any step is taken.
enum ValueKind : unsigned {
  kKindNone = 0,
  kKindUnit = 1u << 0,
  kKindInteger = 1u << 1,
  kKindRecord = 1u << 2,
  kKindReset = 1u << 3,
};

unsigned kind_of(const Value& v);
std::string kinds_to_string(unsigned kinds);

/// The closed set of builtin task functions.
struct TaskFunction {
  enum class Kind {
    kIncrementalAverage,
    kSum,
    kCount,
    kMapAddConstant,
    kIdentity,
    kFilterGreaterThan,
    kForward,
  };

  Kind kind = Kind::kIdentity;
  std::int64_t param = 0;

  static TaskFunction incremental_average() { return {Kind::kIncrementalAverage, 0}; }
  static TaskFunction sum() { return {Kind::kSum, 0}; }
  static TaskFunction count() { return {Kind::kCount, 0}; }
  static TaskFunction map_add(std::int64_t k) { return {Kind::kMapAddConstant, k}; }
  static TaskFunction identity() { return {Kind::kIdentity, 0}; }
  static TaskFunction filter_greater_than(std::int64_t k) {
    return {Kind::kFilterGreaterThan, k};
  }
  static TaskFunction forward() { return {Kind::kForward, 0}; }

  auto operator<=>(const TaskFunction&) const = default;
  bool operator==(const TaskFunction&) const = default;
};

/// Name used in scenario files ("incremental_average", "map_add", ...).
std::string function_name(TaskFunction::Kind kind);
/// Inverse of function_name; returns false for unknown names.
bool parse_function_name(const std::string& name, TaskFunction::Kind& out);
bool function_takes_param(TaskFunction::Kind kind);

struct TaskOutput {
  Value state;
  std::vector<Value> outputs;

  bool operator==(const TaskOutput&) const = default;
};

/// f(v, w) = v', [W'].  Throws TypeError when (v, w) is not in the function's
/// domain.
TaskOutput eval_task_function(const TaskFunction& f, const Value& state,
                              const Value& input);

/// Input shapes accepted by f.
unsigned accepted_input_kinds(const TaskFunction& f);
/// Output shapes emitted by f when fed inputs drawn from `input_kinds`.
unsigned output_kinds(const TaskFunction& f, unsigned input_kinds);
/// Required state shape of f.
unsigned state_kind(const TaskFunction& f);
/// Initial state used when a scenario does not give one.
Value default_initial_state(const TaskFunction& f);

/// Rendering of a volatile value as a single integer: the running average for
/// {sum, count} records (0 when count is 0), the integer itself otherwise.
std::int64_t display_scalar(const Value& v);

}  // namespace absflow
