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

// Single matches between two policies.

#ifndef ARENALADDER_SIMULATE_H_
#define ARENALADDER_SIMULATE_H_

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "arenaladder/engine.h"
#include "arenaladder/policy.h"

namespace arenaladder {

struct MatchResult {
  Outcome outcome = Outcome::kDraw;
  std::array<int, 2> final_hp{};
  int length = 0;
  std::array<Rational, 2> dense{};
  std::uint64_t seed = 0;
  // Filled only when requested.
  std::vector<std::pair<TransAction, TransAction>> trace;
};

// Plays one episode from reset. Each side samples from its own stream
// derived from `seed`, so the match is a pure function of its inputs.
MatchResult play_match(const EngineConfig& config, const Policy& left, const Policy& right,
                       std::uint64_t seed, bool record_trace = false);

// 1 for a win, 1/2 for a draw, 0 for a loss.
double score(const MatchResult& r, Side side);

}  // namespace arenaladder

#endif  // ARENALADDER_SIMULATE_H_
