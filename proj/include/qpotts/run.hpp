// Copyright 2026 The qpotts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Executes one configured experiment and writes its output files.

#pragma once

#include <exception>
#include <string>
#include <string_view>
#include <vector>

#include "qpotts/config.hpp"

namespace qpotts {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitCapacity = 4;

std::string_view version();

/// Maps an exception to an exit code: configuration and parameter problems 2,
/// numeric failures 3, capacity 4, anything else 1.
int exit_code_for(const std::exception& e);

struct RunResult {
  int exit_code = kExitOk;
  std::string summary;             ///< one line
  std::string error;               ///< diagnostic when exit_code != 0
  std::vector<std::string> files;  ///< files written (empty on failure)
};

/// Never throws. On failure every file this run created is removed.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace qpotts
