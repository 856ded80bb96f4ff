// Copyright 2026 The ArenaLadder Authors.
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
// Command-line front end. `run_cli` is the whole program minus process
// setup so tests can drive it in-process.

#ifndef ARENALADDER_TOOLS_CLI_H_
#define ARENALADDER_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace arenaladder {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// args[0] is the program name. Normal output goes to `out`, the one-line
// diagnostic of a failure to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arenaladder

#endif  // ARENALADDER_TOOLS_CLI_H_
