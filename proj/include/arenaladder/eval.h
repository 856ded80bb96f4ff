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
// Evaluation: CPU ladders, Elo ratings and tournaments, exploitability and
// the curriculum trainer for the single-player ladder.
//
// Elo ratings are doubles; the expected score involves 10^x and is not
// rational in general.

#ifndef ARENALADDER_EVAL_H_
#define ARENALADDER_EVAL_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "arenaladder/best_response.h"
#include "arenaladder/game.h"
#include "arenaladder/learner.h"
#include "arenaladder/metagame.h"
#include "arenaladder/policy.h"

namespace arenaladder {

// ---------------------------------------------------------------------------
// CPU ladder

struct LadderRow {
  int level = 0;
  EvalStats stats;
};

// `policy` on `side` against each level in turn; match seeds depend on the
// level, not on its position in `levels`.
std::vector<LadderRow> cpu_ladder(const EngineConfig& config, const Policy& policy, Side side,
                                  const std::vector<int>& levels, int matches,
                                  std::uint64_t seed, int workers = 1);

// Uniform mixture over the given CPU levels. Throws UsageError if empty.
Opponent cpu_mixture(const EngineConfig& config, const std::vector<int>& levels);

// The CPU-pretrained starting point of the population methods: a left
// Q-learner trained for lc.budget_steps against cpu_mixture(levels).
// Observations are side-relative, so its policy also plays right.
QLearner pretrain(const EngineConfig& config, const LearnConfig& lc,
                  const std::vector<int>& levels);

// ---------------------------------------------------------------------------
// Elo

inline constexpr double kInitialElo = 1000;
inline constexpr double kDefaultEloK = 32;

// Expected score of A against B: 1 / (1 + 10^((b - a) / 400)).
double elo_expected(double elo_a, double elo_b);

// Draws count 1/2 for each player. Throws UsageError unless k > 0.
std::pair<double, double> elo_update(double elo_a, double elo_b, Outcome a_result, double k);

struct EloRecord {
  PolicyId a;  // played left
  PolicyId b;
  Outcome outcome = Outcome::kDraw;  // from A's point of view
  double a_before = 0, b_before = 0;
  double a_after = 0, b_after = 0;
};

class RatingTable {
 public:
  explicit RatingTable(double k = kDefaultEloK, double initial = kInitialElo);

  double k() const { return k_; }
  void add(const PolicyId& id);
  // Ratings default to the initial value for unseen ids.
  double rating(const PolicyId& id) const;
  int matches(const PolicyId& id) const;
  void record(const PolicyId& a, const PolicyId& b, Outcome outcome);
  const std::vector<EloRecord>& history() const { return history_; }
  double sum() const;
  // Highest rating first; ties by name.
  std::vector<std::pair<PolicyId, double>> sorted() const;
  // "rank,policy,elo,matches" rows.
  void write_csv(std::ostream& out) const;

 private:
  struct Entry {
    PolicyId id;
    double elo;
    int matches = 0;
  };
  Entry& entry(const PolicyId& id);

  double k_;
  double initial_;
  std::map<std::string, Entry> entries_;
  std::vector<EloRecord> history_;
};

// Round-robin: every ordered pair (i on the left, j on the right, i != j)
// plays `rounds` matches. Matches run concurrently; Elo updates are then
// applied in schedule order (round, i, j). Throws UsageError for fewer
// than two entrants or rounds < 0.
RatingTable run_tournament(const Population& entrants, int rounds, double k,
                           const EngineConfig& config, std::uint64_t seed, int workers = 1);

// ---------------------------------------------------------------------------
// Exploitability

enum class ExploitMethod { kExact, kRL };
std::string_view to_string(ExploitMethod m);
ExploitMethod parse_exploit_method(std::string_view text);

struct ExploitReport {
  PolicyId target;
  Side side = Side::kLeft;  // the side the target plays
  ExploitMethod method = ExploitMethod::kExact;
  Exact exploit_winrate;  // best response win rate, draws as 1/2
  Exact exploit_gap;      // best response value on the +-1 scale
  int matches = 0;
  double std_error = 0;
  std::int64_t steps = 0;  // RL steps actually used
  bool converged = false;  // RL plateau reached before the budget ran out

  // One "key=value" record per line.
  void write(std::ostream& out) const;
};

struct ExploitOptions {
  // RL evaluation matches for the final report and for each window.
  int matches = 1000;
  int window_matches = 200;
  // Number of training windows the budget is divided into.
  int windows = 10;
  double plateau = 0.01;
  int plateau_windows = 3;
  std::size_t cap = kDefaultBRCap;
};

// Exact: the belief-DP best response of the other side against `target`.
template <MarkovGame G>
ExploitReport exact_exploitability(const G& game, const Opponent& target, Side side,
                                   PolicyId id, std::size_t cap = kDefaultBRCap) {
  const BRResult br = exact_best_response(game, target, other(side), cap);
  ExploitReport r;
  r.target = std::move(id);
  r.side = side;
  r.method = ExploitMethod::kExact;
  r.exploit_winrate = br.win_prob;
  r.exploit_gap = br.value;
  return r;
}

// RL: Q-learning exploiter trained window by window until the best
// window win rate improves by less than `plateau` over `plateau_windows`
// consecutive windows or lc.budget_steps is spent. The best window's
// policy is then scored on `matches` fresh matches.
ExploitReport rl_exploitability(const EngineConfig& config, const Opponent& target, Side side,
                                PolicyId id, const LearnConfig& lc,
                                const ExploitOptions& opts = {});

ExploitReport exploitability(const EngineConfig& config, const Opponent& target, Side side,
                             PolicyId id, ExploitMethod method, const LearnConfig& lc,
                             const ExploitOptions& opts = {});

// ---------------------------------------------------------------------------
// Curriculum

// Weights proportional to 1 - p; uniform when that mass is zero. Throws
// UsageError on an empty vector or a rate outside [0, 1].
MetaStrategy curriculum_weights(const std::vector<Exact>& win_rates);

struct CurvePoint {
  int epoch = 0;
  int level = 0;
  double win_rate = 0;
  double schedule_weight = 0;
};

struct CurriculumResult {
  TabularPolicy policy;
  std::vector<CurvePoint> curves;          // epochs x levels, epoch-major
  std::vector<MetaStrategy> schedules;     // one per epoch
  std::vector<double> final_win_rates;     // after the last epoch
  std::int64_t steps = 0;
};

struct CurriculumOptions {
  int epochs = 10;
  int eval_matches = 200;
  // Matches per level for final_win_rates; 0 skips the final evaluation.
  int final_matches = 400;
};

// Each epoch estimates the learner's win rate against every level,
// recomputes the schedule and trains for lc.budget_steps against CPUs
// drawn from it. The learner plays left.
CurriculumResult full_game_train(const EngineConfig& config, const std::vector<int>& levels,
                                 const LearnConfig& lc, const CurriculumOptions& opts,
                                 int workers = 1);

// "epoch,level,win_rate,schedule_weight" rows.
void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& curves);

}  // namespace arenaladder

#endif  // ARENALADDER_EVAL_H_
