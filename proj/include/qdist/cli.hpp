// Copyright 2026 The qdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qdist/codes.hpp"

namespace qdist {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,
  kExitSizeGuard = 3,
  kExitInvariant = 4,
};

/// Runs the tool on `args` (without the program name) and returns its exit
/// status. Normal output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Codes named by a suite spec such as "circulant:5-16" or "circulant:7".
std::vector<CodeFile> suite_codes(const std::string &spec);

/// Header of the bench table.
inline constexpr const char *kBenchHeader = "n,code_id,solver,runs,best_energy,oracle_d,ar,success_rate,wall_ms";
/// Header of the anneal table.
inline constexpr const char *kAnnealHeader = "t_a,p_s,steps,max_drift";

}  // namespace qdist
