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

// Finite-horizon two-player zero-sum games as seen by the solvers: actions
// are indices, observations are symbolic, terminal values are the left
// player's sparse reward.

#ifndef ARENALADDER_GAME_H_
#define ARENALADDER_GAME_H_

#include <concepts>
#include <string>
#include <vector>

#include "arenaladder/engine.h"
#include "arenaladder/rational.h"

namespace arenaladder {

template <class G>
concept MarkovGame = requires(const G& g, const typename G::State& s, int a, Side side) {
  { g.initial() } -> std::same_as<typename G::State>;
  { g.num_actions() } -> std::convertible_to<int>;
  { g.next(s, a, a) } -> std::same_as<typename G::State>;
  { g.terminal(s) } -> std::convertible_to<bool>;
  { g.left_value(s) } -> std::same_as<Exact>;
  { g.observation(s, side) } -> std::same_as<Observation>;
  { g.key(s) } -> std::convertible_to<std::string>;
};

// MiniBrawl behind the index-action interface.
class BrawlGame {
 public:
  using State = GameState;

  explicit BrawlGame(EngineConfig config)
      : config_(std::move(config)), actions_(config_.legal_actions()) {
    config_.validate();
  }

  const EngineConfig& config() const { return config_; }
  const std::vector<TransAction>& actions() const { return actions_; }

  State initial() const { return reset(config_); }
  int num_actions() const { return static_cast<int>(actions_.size()); }
  State next(const State& s, int a, int b) const {
    return advance(s, actions_[a], actions_[b], config_);
  }
  bool terminal(const State& s) const { return s.terminal; }
  Exact left_value(const State& s) const {
    if (!s.winner || *s.winner == Outcome::kDraw) return Exact(0);
    return *s.winner == Outcome::kLeftWin ? Exact(1) : Exact(-1);
  }
  Observation observation(const State& s, Side side) const {
    return observe(s, side, config_);
  }
  std::string key(const State& s) const { return state_key(s); }

 private:
  EngineConfig config_;
  std::vector<TransAction> actions_;
};

// One simultaneous move followed by a terminal payoff for the left player.
// Both players see the same (empty) observation at the root.
class MatrixGame {
 public:
  using State = int;  // 0 = root, 1 + a * n + b = terminal after (a, b)

  explicit MatrixGame(std::vector<std::vector<Exact>> left_payoff);
  // Rock-paper-scissors with win +1, loss -1, draw 0.
  static MatrixGame rock_paper_scissors();

  const std::vector<std::vector<Exact>>& payoff() const { return payoff_; }
  State initial() const { return 0; }
  int num_actions() const { return n_; }
  State next(const State&, int a, int b) const { return 1 + a * n_ + b; }
  bool terminal(const State& s) const { return s != 0; }
  Exact left_value(const State& s) const {
    if (s == 0) return Exact(0);
    return payoff_[(s - 1) / n_][(s - 1) % n_];
  }
  Observation observation(const State&, Side) const { return Observation{}; }
  std::string key(const State& s) const { return std::to_string(s); }

 private:
  std::vector<std::vector<Exact>> payoff_;
  int n_;
};

static_assert(MarkovGame<BrawlGame>);
static_assert(MarkovGame<MatrixGame>);

}  // namespace arenaladder

#endif  // ARENALADDER_GAME_H_
