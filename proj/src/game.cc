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

#include "arenaladder/game.h"

namespace arenaladder {

MatrixGame::MatrixGame(std::vector<std::vector<Exact>> left_payoff)
    : payoff_(std::move(left_payoff)), n_(static_cast<int>(payoff_.size())) {
  if (n_ == 0) throw UsageError("matrix game needs at least one action");
  for (const auto& row : payoff_) {
    if (static_cast<int>(row.size()) != n_) throw UsageError("matrix game must be square");
    for (const auto& v : row) {
      if (v < -1 || v > 1) throw UsageError("matrix game payoffs must lie in [-1, 1]");
    }
  }
}

MatrixGame MatrixGame::rock_paper_scissors() {
  return MatrixGame({{Exact(0), Exact(-1), Exact(1)},
                     {Exact(1), Exact(0), Exact(-1)},
                     {Exact(-1), Exact(1), Exact(0)}});
}

}  // namespace arenaladder
