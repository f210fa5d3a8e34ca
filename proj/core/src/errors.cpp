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

#include "absflow/errors.hpp"

#include <utility>

namespace absflow {

ScenarioError::ScenarioError(std::vector<std::string> issues)
    : std::runtime_error([&] {
        std::string msg = "invalid scenario";
        for (const auto& i : issues) msg += "\n  " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

StateLimitExceeded::StateLimitExceeded(std::size_t limit)
    : std::runtime_error("state-space limit of " + std::to_string(limit) +
                         " nodes exceeded"),
      limit_(limit) {}

}  // namespace absflow
