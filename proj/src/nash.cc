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

#include "arenaladder/nash.h"

#include "arenaladder/common.h"

namespace arenaladder {

// Shift the payoffs to A = M + c > 0 and solve the column player's program
//   maximize sum(y)  subject to  A y <= 1, y >= 0
// from the all-slack basis. At the optimum y / sum(y) is minimax for the
// column player, the slack reduced costs u give the row strategy u / sum(u),
// and the value of A is 1 / sum(y).
MatrixSolution solve_zero_sum(const ExactMatrix& m) {
  const std::size_t rows = m.size();
  if (rows == 0 || m[0].empty()) throw UsageError("empty payoff matrix");
  const std::size_t cols = m[0].size();
  Exact lo = m[0][0];
  for (const auto& r : m) {
    if (r.size() != cols) throw UsageError("ragged payoff matrix");
    for (const auto& v : r) lo = v < lo ? v : lo;
  }
  const Exact shift = 1 - lo;

  // Tableau columns: [0, cols) structural, [cols, cols + rows) slack.
  const std::size_t width = cols + rows;
  std::vector<std::vector<Exact>> t(rows, std::vector<Exact>(width, Exact(0)));
  std::vector<Exact> rhs(rows, Exact(1));
  std::vector<Exact> obj(width, Exact(0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[i][j] = m[i][j] + shift;
    t[i][cols + i] = 1;
    basis[i] = cols + i;
  }
  for (std::size_t j = 0; j < cols; ++j) obj[j] = -1;
  Exact z = 0;

  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < width; ++j) {
      if (obj[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = rows;
    Exact best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] <= 0) continue;
      Exact ratio = rhs[i] / t[i][enter];
      if (leave == rows || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == rows) throw Error("unbounded matrix-game program");
    const Exact piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    rhs[leave] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Exact f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) {
        if (t[leave][j] != 0) t[i][j] -= f * t[leave][j];
      }
      rhs[i] -= f * rhs[leave];
    }
    if (obj[enter] != 0) {
      const Exact f = obj[enter];
      for (std::size_t j = 0; j < width; ++j) {
        if (t[leave][j] != 0) obj[j] -= f * t[leave][j];
      }
      z -= f * rhs[leave];
    }
    basis[leave] = enter;
  }

  MatrixSolution s;
  s.col.assign(cols, Exact(0));
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < cols) s.col[basis[i]] = rhs[i];
  }
  s.row.assign(rows, Exact(0));
  for (std::size_t i = 0; i < rows; ++i) s.row[i] = obj[cols + i];
  // z = sum(y) = sum(u) by strong duality.
  for (auto& y : s.col) y /= z;
  for (auto& x : s.row) x /= z;
  s.value = 1 / z - shift;
  return s;
}

Exact row_guarantee(const ExactMatrix& m, const std::vector<Exact>& row) {
  Exact best;
  for (std::size_t j = 0; j < m[0].size(); ++j) {
    Exact v = 0;
    for (std::size_t i = 0; i < m.size(); ++i) v += row[i] * m[i][j];
    if (j == 0 || v < best) best = v;
  }
  return best;
}

Exact col_guarantee(const ExactMatrix& m, const std::vector<Exact>& col) {
  Exact best;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Exact v = 0;
    for (std::size_t j = 0; j < m[i].size(); ++j) v += m[i][j] * col[j];
    if (i == 0 || v > best) best = v;
  }
  return best;
}

}  // namespace arenaladder
