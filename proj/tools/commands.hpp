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

// Subcommands of the absflow tool. Each writes its report to `out`,
// diagnostics to `err`, and returns the process exit code.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "absflow/semantics.hpp"

namespace absflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitViolation = 3;

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, std::ostream& out,
            std::ostream& err);

struct FtOptions {
  enum class Mode { kRandom, kExhaustive };
  Mode mode = Mode::kRandom;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  std::size_t depth = 0;
  std::size_t budget = 0;
  /// Test-only: run the engine with the lcs message purge disabled.
  RecoveryMode engine = RecoveryMode::kPurge;
};

int cmd_check_ft(const std::string& path, const FtOptions& options, std::ostream& out,
                 std::ostream& err);

int cmd_check_liveness(const std::string& path, std::ostream& out, std::ostream& err);

int cmd_lemmas(const std::string& path, std::size_t n, std::uint64_t seed, std::ostream& out,
               std::ostream& err);

int cmd_enumerate(const std::string& path, std::size_t depth, std::size_t budget, bool dump,
                  std::ostream& out, std::ostream& err);

}  // namespace absflow::cli
