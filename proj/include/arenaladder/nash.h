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

// Exact solution of finite two-player zero-sum matrix games by the simplex
// method over GMP rationals.

#ifndef ARENALADDER_NASH_H_
#define ARENALADDER_NASH_H_

#include <vector>

#include "arenaladder/rational.h"

namespace arenaladder {

using ExactMatrix = std::vector<std::vector<Exact>>;

struct MatrixSolution {
  std::vector<Exact> row;  // maximizer
  std::vector<Exact> col;  // minimizer
  Exact value;             // row player's game value
};

// Maximin row strategy, minimax column strategy and the value. Ties in the
// pivoting are broken by Bland's rule, so the result is deterministic.
MatrixSolution solve_zero_sum(const ExactMatrix& m);

// min_j (x^T M)_j: what the row strategy guarantees.
Exact row_guarantee(const ExactMatrix& m, const std::vector<Exact>& row);
// max_i (M y)_i: the most the column strategy concedes.
Exact col_guarantee(const ExactMatrix& m, const std::vector<Exact>& col);

}  // namespace arenaladder

#endif  // ARENALADDER_NASH_H_
