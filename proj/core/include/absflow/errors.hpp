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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace absflow {

/// Malformed model data (empty archive, unknown processor, ...).
class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A task function was applied outside its domain.
class TypeError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// A step was requested that no rule derives from the given configuration.
class NotEnabledError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// A trace is not applicable from the given configuration.
class InvalidTraceError : public std::runtime_error {
 public:
  InvalidTraceError(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Scenario rejected at load time. Carries every violation found.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// The exhaustive explorer hit its node limit.
class StateLimitExceeded : public std::runtime_error {
 public:
  explicit StateLimitExceeded(std::size_t limit);
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

}  // namespace absflow
