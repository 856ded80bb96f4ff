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

// Tabular learners: epsilon-greedy Q-learning against a frozen opponent
// (the RL best-response oracle) and simultaneous independent learning for
// both sides.
//
// Decisions are only taken when the learner's fighter is actionable; steps
// spent in startup, recovery or stun are folded into the preceding
// decision, so the learner sees a semi-Markov problem over its own choices.
// One table is kept per observation regardless of the time step (the
// discount is 1 on the finite horizon). The learning rate of a pair is
// max(step_size, 1 / visits), so early estimates are sample averages.

#ifndef ARENALADDER_LEARNER_H_
#define ARENALADDER_LEARNER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "arenaladder/best_response.h"
#include "arenaladder/engine.h"
#include "arenaladder/policy.h"

namespace arenaladder {

enum class RewardMode { kDense, kSparse };

struct LearnConfig {
  std::int64_t budget_steps = 0;
  Rational step_size{1, 10};
  Rational exploration{1, 10};
  Rational step_ratio{1};
  std::uint64_t seed = 0;
  RewardMode reward = RewardMode::kDense;

  // Throws ConfigError naming the violated bound.
  void validate() const;
};

using QTable = std::unordered_map<ObsKey, std::vector<double>>;
using VisitTable = std::unordered_map<ObsKey, std::vector<std::uint32_t>>;

// Greedy policy of a Q table; ties go to the lowest index and unseen
// observations fall back to uniform.
TabularPolicy greedy_policy(const QTable& q, int num_actions);

class QLearner {
 public:
  QLearner(const EngineConfig& config, Side side, LearnConfig lc);

  // Continues from an existing table and its visit counts.
  void set_table(QTable q, VisitTable visits = {}) {
    q_ = std::move(q);
    visits_ = std::move(visits);
  }
  const QTable& table() const { return q_; }
  const VisitTable& visits() const { return visits_; }
  std::int64_t steps() const { return steps_; }

  // Trains for `steps` engine steps (finishing the last episode early)
  // against opponents drawn per episode from `opp`.
  void train(const Opponent& opp, std::int64_t steps);
  TabularPolicy policy() const { return greedy_policy(q_, num_actions_); }

 private:
  std::vector<double>& row(ObsKey k);
  void update(ObsKey k, int a, double target);

  EngineConfig config_;
  std::vector<TransAction> actions_;
  int num_actions_;
  Side side_;
  LearnConfig lc_;
  double eta_;
  double eps_;
  Rng rng_;
  QTable q_;
  VisitTable visits_;
  std::int64_t steps_ = 0;
};

struct EvalStats {
  int matches = 0;
  int wins = 0;
  int draws = 0;
  Exact win_rate;  // (wins + draws / 2) / matches
  double std_error = 0;
};

// Plays `matches` seeded episodes of `policy` on `side` against opponents
// drawn per episode from `opp`.
EvalStats evaluate_matches(const EngineConfig& config, const Policy& policy, Side side,
                           const Opponent& opp, int matches, std::uint64_t seed);

struct RLBestResponse {
  TabularPolicy policy;
  Exact value;     // 2 * win_prob - 1
  Exact win_prob;  // estimated over the evaluation matches
  double std_error = 0;
  int matches = 0;
  QTable q;
};

RLBestResponse rl_best_response(const EngineConfig& config, const Opponent& opp,
                                Side responder, const LearnConfig& lc, int eval_matches = 1000);

struct LearnDiagnostic {
  std::int64_t iteration = 0;  // episode index
  std::int64_t steps = 0;
  double value_estimate = 0;   // running mean of the left episode score
  double change_left = 0;      // L1 policy change in this episode
  double change_right = 0;
};

struct IndependentResult {
  TabularPolicy left;
  TabularPolicy right;
  double cumulative_change_left = 0;
  double cumulative_change_right = 0;
  std::vector<LearnDiagnostic> diagnostics;
};

// Both sides learn simultaneously from shared self-play episodes: each
// keeps an expected-SARSA critic and moves its policy toward the greedy
// action at rate step_size. lc_right.step_size = lc_left.step_size *
// step_ratio gives the two-timescale variant. The returned policies are
// the behaviour policies, (1 - exploration) * pi + exploration * uniform.
IndependentResult independent_learn(const EngineConfig& config, const LearnConfig& lc_left,
                                    const LearnConfig& lc_right,
                                    const TabularPolicy* init_left = nullptr,
                                    const TabularPolicy* init_right = nullptr);

// Two-timescale configuration: right side slowed by lc.step_ratio.
std::pair<LearnConfig, LearnConfig> two_timescale(const LearnConfig& lc);

}  // namespace arenaladder

#endif  // ARENALADDER_LEARNER_H_
