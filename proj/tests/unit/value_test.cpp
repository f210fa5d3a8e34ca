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

#include <gtest/gtest.h>

#include "absflow/errors.hpp"

namespace absflow {
namespace {

Value avg_state(std::int64_t sum, std::int64_t count) {
  return Value::record({{"sum", sum}, {"count", count}});
}

TEST(Value, ToString) {
  EXPECT_EQ(Value::unit().to_string(), "()");
  EXPECT_EQ(Value::integer(-3).to_string(), "-3");
  EXPECT_EQ(Value::reset().to_string(), "Reset");
  EXPECT_EQ(avg_state(0, 0).to_string(), "{count=0,sum=0}");
}

TEST(Value, OrderingAndAccessors) {
  EXPECT_EQ(Value::integer(4), Value::integer(4));
  EXPECT_NE(Value::integer(4), Value::integer(5));
  EXPECT_NE(Value::unit(), Value::reset());
  EXPECT_EQ(avg_state(3, 1).field("sum"), 3);
  EXPECT_THROW(Value::unit().as_integer(), TypeError);
  EXPECT_THROW(Value::integer(1).as_record(), TypeError);
}

// Hand-computed: the running average emitted after each integer is the floor
// of sum / count after the update; Reset clears the state and emits nothing.
TEST(TaskFunction, IncrementalAverage) {
  const TaskFunction f = TaskFunction::incremental_average();
  TaskOutput r = eval_task_function(f, avg_state(0, 0), Value::integer(1));
  EXPECT_EQ(r.state, avg_state(1, 1));
  ASSERT_EQ(r.outputs.size(), 1u);
  EXPECT_EQ(r.outputs[0], Value::integer(1));

  r = eval_task_function(f, avg_state(1, 1), Value::integer(3));
  EXPECT_EQ(r.state, avg_state(4, 2));
  EXPECT_EQ(r.outputs, std::vector<Value>{Value::integer(2)});

  r = eval_task_function(f, avg_state(4, 2), Value::reset());
  EXPECT_EQ(r.state, avg_state(0, 0));
  EXPECT_TRUE(r.outputs.empty());

  r = eval_task_function(f, avg_state(3, 1), Value::integer(5));
  EXPECT_EQ(r.state, avg_state(8, 2));
  EXPECT_EQ(r.outputs, std::vector<Value>{Value::integer(4)});

  // Floor division for negative sums.
  r = eval_task_function(f, avg_state(0, 0), Value::integer(-3));
  r = eval_task_function(f, r.state, Value::integer(0));
  EXPECT_EQ(r.outputs, std::vector<Value>{Value::integer(-2)});
}

TEST(TaskFunction, Builtins) {
  TaskOutput r = eval_task_function(TaskFunction::sum(), Value::integer(5), Value::integer(2));
  EXPECT_EQ(r.state, Value::integer(7));
  EXPECT_EQ(r.outputs, std::vector<Value>{Value::integer(7)});

  r = eval_task_function(TaskFunction::count(), Value::integer(2), Value::reset());
  EXPECT_EQ(r.state, Value::integer(3));
  EXPECT_EQ(r.outputs, std::vector<Value>{Value::integer(3)});

  r = eval_task_function(TaskFunction::map_add(10), Value::unit(), Value::integer(2));
  EXPECT_EQ(r.state, Value::unit());
  EXPECT_EQ(r.outputs, std::vector<Value>{Value::integer(12)});

  r = eval_task_function(TaskFunction::filter_greater_than(3), Value::unit(), Value::integer(3));
  EXPECT_TRUE(r.outputs.empty());
  r = eval_task_function(TaskFunction::filter_greater_than(3), Value::unit(), Value::integer(4));
  EXPECT_EQ(r.outputs, std::vector<Value>{Value::integer(4)});

  r = eval_task_function(TaskFunction::identity(), Value::unit(), Value::reset());
  EXPECT_EQ(r.outputs, std::vector<Value>{Value::reset()});
}

TEST(TaskFunction, RejectsValuesOutsideDomain) {
  EXPECT_THROW(eval_task_function(TaskFunction::sum(), Value::integer(0), Value::reset()),
               TypeError);
  EXPECT_THROW(eval_task_function(TaskFunction::incremental_average(), Value::integer(0),
                                  Value::integer(1)),
               TypeError);
  EXPECT_THROW(eval_task_function(TaskFunction::identity(), Value::integer(0), Value::integer(1)),
               TypeError);
}

TEST(TaskFunction, NamesRoundTrip) {
  using Kind = TaskFunction::Kind;
  for (Kind k : {Kind::kIncrementalAverage, Kind::kSum, Kind::kCount, Kind::kMapAddConstant,
                 Kind::kIdentity, Kind::kFilterGreaterThan, Kind::kForward}) {
    Kind parsed{};
    ASSERT_TRUE(parse_function_name(function_name(k), parsed)) << function_name(k);
    EXPECT_EQ(parsed, k);
  }
  Kind unused{};
  EXPECT_FALSE(parse_function_name("median", unused));
  EXPECT_TRUE(function_takes_param(Kind::kMapAddConstant));
  EXPECT_FALSE(function_takes_param(Kind::kSum));
}

TEST(TaskFunction, KindsMatchEvaluation) {
  const TaskFunction fs[] = {TaskFunction::incremental_average(), TaskFunction::sum(),
                             TaskFunction::count(),  TaskFunction::map_add(2),
                             TaskFunction::identity(), TaskFunction::filter_greater_than(1)};
  for (const TaskFunction& f : fs) {
    const Value init = default_initial_state(f);
    EXPECT_EQ(kind_of(init), state_kind(f));
    TaskOutput r = eval_task_function(f, init, Value::integer(5));
    EXPECT_EQ(kind_of(r.state), state_kind(f));
    for (const Value& w : r.outputs) {
      EXPECT_NE(kind_of(w) & output_kinds(f, kKindInteger), 0u);
    }
  }
}

TEST(DisplayScalar, AverageOfRecord) {
  EXPECT_EQ(display_scalar(avg_state(0, 0)), 0);
  EXPECT_EQ(display_scalar(avg_state(8, 2)), 4);
  EXPECT_EQ(display_scalar(avg_state(4, 2)), 2);
  EXPECT_EQ(display_scalar(Value::integer(7)), 7);
}

}  // namespace
}  // namespace absflow
