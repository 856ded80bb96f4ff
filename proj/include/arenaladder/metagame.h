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

// Population-based training: payoff matrices between populations, meta
// solvers (uniform for fictitious self-play, Nash for PSRO), the
// alternating population loop and League training with main agents, main
// exploiters and league exploiters.

#ifndef ARENALADDER_METAGAME_H_
#define ARENALADDER_METAGAME_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arenaladder/best_response.h"
#include "arenaladder/learner.h"
#include "arenaladder/nash.h"
#include "arenaladder/policy.h"

namespace arenaladder {

struct Population {
  std::vector<PolicyId> ids;
  std::vector<PolicyPtr> policies;

  std::size_t size() const { return ids.size(); }
  void add(PolicyId id, PolicyPtr p) {
    ids.push_back(std::move(id));
    policies.push_back(std::move(p));
  }
  std::optional<std::size_t> find(const PolicyId& id) const;
};

// Win rate of the row policy playing left against the column policy
// playing right. An entry is unknown until estimated; reading an unknown
// entry throws instead of returning 0.
class PayoffMatrix {
 public:
  const std::vector<PolicyId>& rows() const { return rows_; }
  const std::vector<PolicyId>& cols() const { return cols_; }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_cols() const { return cols_.size(); }

  void add_row(PolicyId id);
  void add_col(PolicyId id);
  std::optional<std::size_t> row_index(const PolicyId& id) const;
  std::optional<std::size_t> col_index(const PolicyId& id) const;

  bool known(std::size_t r, std::size_t c) const { return win_rate_[r][c].has_value(); }
  // Throws UsageError for an unknown entry.
  const Exact& win_rate(std::size_t r, std::size_t c) const;
  int matches(std::size_t r, std::size_t c) const { return matches_[r][c]; }
  // matches must be >= 1 and the rate within [0, 1].
  void set(std::size_t r, std::size_t c, Exact rate, int matches);
  std::size_t unknown_count() const;

  // Row payoff win_rate - 1/2 of the zero-sum game. Throws UsageError
  // naming the first unknown entry.
  ExactMatrix zero_sum() const;

  friend bool operator==(const PayoffMatrix&, const PayoffMatrix&) = default;

 private:
  std::vector<PolicyId> rows_;
  std::vector<PolicyId> cols_;
  std::vector<std::vector<std::optional<Exact>>> win_rate_;
  std::vector<std::vector<int>> matches_;
};

// Evaluates one entry: left win rate and the number of matches behind it.
struct PayoffEntry {
  Exact win_rate;
  int matches = 0;
  friend bool operator==(const PayoffEntry&, const PayoffEntry&) = default;
};
using PayoffFn =
    std::function<PayoffEntry(const Policy& left, const Policy& right, std::uint64_t seed)>;

// Seeded matches between the two policies.
PayoffFn sampled_payoff(const EngineConfig& config, int matches_per_pair);

// Exact win probability by backward induction; recorded as one match.
template <MarkovGame G>
PayoffFn exact_payoff(G game) {
  return [game = std::move(game)](const Policy& l, const Policy& r, std::uint64_t) {
    return PayoffEntry{(1 + evaluate_pair(game, l, r)) / 2, 1};
  };
}

// Per-entry seed; depends only on the two identities, so cached and
// re-estimated entries agree.
std::uint64_t entry_seed(std::uint64_t seed, const PolicyId& row, const PolicyId& col);

// Adds missing rows and columns and estimates every unknown entry.
// Returns the number of entries estimated.
std::size_t refresh_payoff(PayoffMatrix& m, const Population& left, const Population& right,
                           const PayoffFn& fn, std::uint64_t seed, int workers = 1);

// Throws UsageError on an empty population or matches_per_pair < 1.
PayoffMatrix estimate_payoff(const Population& left, const Population& right,
                             int matches_per_pair, const EngineConfig& config,
                             std::uint64_t seed, int workers = 1);

// Throws UsageError on an empty population.
MetaStrategy solve_uniform(std::size_t population_size);

struct NashSolution {
  MetaStrategy row;
  MetaStrategy col;
  Exact value;  // row value of the zero-sum game win_rate - 1/2
};

// Throws UsageError if any entry is unknown.
NashSolution solve_nash(const PayoffMatrix& p);

enum class MetaSolver { kFsp, kPsro };
std::string_view to_string(MetaSolver s);

// Best-response oracle: a policy for `responder` against the mixture.
using BROracle =
    std::function<PolicyPtr(const Opponent& opponent, Side responder, int iteration)>;

template <MarkovGame G>
BROracle exact_br_oracle(G game, std::size_t cap = kDefaultBRCap) {
  return [game = std::move(game), cap](const Opponent& opp, Side responder, int) -> PolicyPtr {
    return std::make_shared<TabularPolicy>(exact_best_response(game, opp, responder, cap).policy);
  };
}

// Q-learning from scratch for lc.budget_steps; seeds vary per iteration.
BROracle rl_br_oracle(const EngineConfig& config, const LearnConfig& lc);

struct LoopResult {
  Population mu;  // left
  Population nu;  // right
  MetaStrategy rho_mu;
  MetaStrategy rho_nu;
  // Entry t - 1 holds the state after iteration t.
  std::vector<MetaStrategy> rho_mu_history;
  std::vector<MetaStrategy> rho_nu_history;
  std::vector<PayoffMatrix> payoff_history;
  PayoffMatrix payoff;
};

// Alternating population loop. Odd iterations add a left best response to
// the right mixture, even iterations a right best response to the left
// mixture; the meta-strategies are then re-solved on the refreshed payoff
// matrix. An oracle failure is rethrown with the iteration index in its
// message (CapacityError keeps its type and measured size).
LoopResult population_loop(MetaSolver solver, int iterations, PolicyPtr init_left,
                           PolicyPtr init_right, const BROracle& br, const PayoffFn& payoff,
                           std::uint64_t seed, int workers = 1);

// ---------------------------------------------------------------------------
// League

enum class LeagueRole { kMA, kME, kLE0, kLE1 };
inline constexpr std::array<LeagueRole, 4> kLeagueRoles = {LeagueRole::kMA, LeagueRole::kME,
                                                           LeagueRole::kLE0, LeagueRole::kLE1};
std::string_view to_string(LeagueRole r);
LeagueRole parse_league_role(std::string_view text);

struct LeagueParams {
  Exact self_play = frac(35, 100);
  Exact pfsp_all = frac(50, 100);
  Exact pfsp_exploiters = frac(15, 100);
  Exact me_reset = frac(7, 10);
  Exact me_struggle = frac(1, 5);
  // Checkpoints of the opposite main agent a struggling ME falls back to.
  int me_recent = 3;
};

// f(p) = (1 - p)^2 renormalized; uniform when every weight is 0.
std::vector<Exact> pfsp_weights(const std::vector<Exact>& win_rates);

struct LeagueAgent {
  LeagueRole role = LeagueRole::kMA;
  Side side = Side::kLeft;
  std::vector<PolicyId> checkpoints;
  std::vector<PolicyPtr> snapshots;
  QTable q;
  VisitTable visits;
  std::int64_t steps = 0;
  int resets = 0;
};

struct LeagueRoster {
  std::array<std::array<LeagueAgent, 4>, 2> agents;  // [side][role]
  std::array<PolicyId, 2> init_ids;
  std::array<PolicyPtr, 2> init_policies;
  QTable init_table;
  VisitTable init_visits;

  static LeagueRoster create(const QLearner& pretrained, int num_actions);
  LeagueAgent& agent(Side s, LeagueRole r) { return agents[index(s)][static_cast<int>(r)]; }
  const LeagueAgent& agent(Side s, LeagueRole r) const {
    return agents[index(s)][static_cast<int>(r)];
  }
  // Latest checkpoint, or the side's initial policy before the first one.
  PolicyId current(Side s, LeagueRole r) const;
  // Every identity: the two initial policies, then checkpoints in
  // creation order.
  Population population() const;
  PolicyPtr policy(const PolicyId& id) const;

  std::vector<PolicyId> creation_order;
};

// Opponent mixture for the learner in `role` on `side` this cycle.
MixturePolicy league_step(const LeagueRoster& roster, Side side, LeagueRole role,
                          const PayoffMatrix& p, const LeagueParams& params = {});

struct LeagueResult {
  LeagueRoster roster;
  PayoffMatrix payoff;  // square over roster.population()
};

// Each cycle trains MA, ME, LE0, LE1 (left before right) for
// lc.budget_steps against their league_step mixtures, snapshots them and
// refreshes the payoff matrix. A main exploiter whose new checkpoint wins
// at least me_reset against the current opposite main agent restarts from
// the pretrained learner's table.
LeagueResult run_league(const EngineConfig& config, int cycles, const LearnConfig& lc,
                        const QLearner& pretrained, const PayoffFn& payoff, std::uint64_t seed,
                        const LeagueParams& params = {}, int workers = 1);

}  // namespace arenaladder

#endif  // ARENALADDER_METAGAME_H_
