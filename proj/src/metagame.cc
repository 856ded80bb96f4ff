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

#include "arenaladder/metagame.h"

#include <algorithm>

#include "arenaladder/parallel.h"
#include "arenaladder/simulate.h"

namespace arenaladder {

std::optional<std::size_t> Population::find(const PolicyId& id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// PayoffMatrix

void PayoffMatrix::add_row(PolicyId id) {
  rows_.push_back(std::move(id));
  win_rate_.emplace_back(cols_.size());
  matches_.emplace_back(cols_.size(), 0);
}

void PayoffMatrix::add_col(PolicyId id) {
  cols_.push_back(std::move(id));
  for (auto& r : win_rate_) r.emplace_back();
  for (auto& r : matches_) r.push_back(0);
}

std::optional<std::size_t> PayoffMatrix::row_index(const PolicyId& id) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> PayoffMatrix::col_index(const PolicyId& id) const {
  for (std::size_t i = 0; i < cols_.size(); ++i) {
    if (cols_[i] == id) return i;
  }
  return std::nullopt;
}

const Exact& PayoffMatrix::win_rate(std::size_t r, std::size_t c) const {
  if (!win_rate_.at(r).at(c)) {
    throw UsageError("payoff entry (" + rows_[r].name() + ", " + cols_[c].name() +
                     ") is unknown; estimate it first");
  }
  return *win_rate_[r][c];
}

void PayoffMatrix::set(std::size_t r, std::size_t c, Exact rate, int matches) {
  if (matches < 1) throw UsageError("a payoff entry needs at least one match");
  if (rate < 0 || rate > 1) throw UsageError("win rate outside [0, 1]");
  win_rate_.at(r).at(c) = std::move(rate);
  matches_[r][c] = matches;
}

std::size_t PayoffMatrix::unknown_count() const {
  std::size_t n = 0;
  for (const auto& r : win_rate_) {
    for (const auto& v : r) n += !v.has_value();
  }
  return n;
}

ExactMatrix PayoffMatrix::zero_sum() const {
  ExactMatrix m(rows_.size(), std::vector<Exact>(cols_.size()));
  const Exact half(1, 2);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t c = 0; c < cols_.size(); ++c) m[r][c] = win_rate(r, c) - half;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Estimation

PayoffFn sampled_payoff(const EngineConfig& config, int matches_per_pair) {
  if (matches_per_pair < 1) throw UsageError("matches_per_pair must be >= 1");
  return [config, matches_per_pair](const Policy& l, const Policy& r, std::uint64_t seed) {
    long halves = 0;
    for (int m = 0; m < matches_per_pair; ++m) {
      halves += half_points(play_match(config, l, r, derive_seed(seed, m)).outcome, Side::kLeft);
    }
    return PayoffEntry{frac(halves, 2L * matches_per_pair), matches_per_pair};
  };
}

std::uint64_t entry_seed(std::uint64_t seed, const PolicyId& row, const PolicyId& col) {
  return derive_seed(seed, fnv1a64(row.name()), fnv1a64(col.name()));
}

std::size_t refresh_payoff(PayoffMatrix& m, const Population& left, const Population& right,
                           const PayoffFn& fn, std::uint64_t seed, int workers) {
  for (const auto& id : left.ids) {
    if (!m.row_index(id)) m.add_row(id);
  }
  for (const auto& id : right.ids) {
    if (!m.col_index(id)) m.add_col(id);
  }
  struct Job {
    std::size_t r, c;
    const Policy* left;
    const Policy* right;
  };
  std::vector<Job> jobs;
  for (std::size_t r = 0; r < m.num_rows(); ++r) {
    const auto li = left.find(m.rows()[r]);
    if (!li) continue;
    for (std::size_t c = 0; c < m.num_cols(); ++c) {
      if (m.known(r, c)) continue;
      const auto ri = right.find(m.cols()[c]);
      if (!ri) continue;
      jobs.push_back({r, c, left.policies[*li].get(), right.policies[*ri].get()});
    }
  }
  std::vector<PayoffEntry> out(jobs.size());
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    const Job& j = jobs[i];
    out[i] = fn(*j.left, *j.right, entry_seed(seed, m.rows()[j.r], m.cols()[j.c]));
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    m.set(jobs[i].r, jobs[i].c, out[i].win_rate, out[i].matches);
  }
  return jobs.size();
}

PayoffMatrix estimate_payoff(const Population& left, const Population& right,
                             int matches_per_pair, const EngineConfig& config,
                             std::uint64_t seed, int workers) {
  if (left.size() == 0 || right.size() == 0) throw UsageError("empty population");
  PayoffMatrix m;
  refresh_payoff(m, left, right, sampled_payoff(config, matches_per_pair), seed, workers);
  return m;
}

// ---------------------------------------------------------------------------
// Meta solvers

MetaStrategy solve_uniform(std::size_t population_size) {
  if (population_size == 0) throw UsageError("empty population");
  return MetaStrategy::uniform(population_size);
}

NashSolution solve_nash(const PayoffMatrix& p) {
  if (p.num_rows() == 0 || p.num_cols() == 0) throw UsageError("empty payoff matrix");
  const MatrixSolution s = solve_zero_sum(p.zero_sum());
  return {MetaStrategy(s.row), MetaStrategy(s.col), s.value};
}

std::string_view to_string(MetaSolver s) { return s == MetaSolver::kFsp ? "fsp" : "psro"; }

BROracle rl_br_oracle(const EngineConfig& config, const LearnConfig& lc) {
  return [config, lc](const Opponent& opp, Side responder, int iteration) -> PolicyPtr {
    LearnConfig l = lc;
    l.seed = derive_seed(lc.seed, static_cast<std::uint64_t>(iteration));
    QLearner q(config, responder, l);
    q.train(opp, l.budget_steps);
    return std::make_shared<TabularPolicy>(q.policy());
  };
}

LoopResult population_loop(MetaSolver solver, int iterations, PolicyPtr init_left,
                           PolicyPtr init_right, const BROracle& br, const PayoffFn& payoff,
                           std::uint64_t seed, int workers) {
  if (iterations < 1) throw UsageError("population loop needs at least one iteration");
  if (!init_left || !init_right) throw UsageError("population loop needs initial policies");
  const std::string role = solver == MetaSolver::kFsp ? "FSP" : "PSRO";
  LoopResult r;
  r.mu.add({"INIT", Side::kLeft, 0}, std::move(init_left));
  r.nu.add({"INIT", Side::kRight, 0}, std::move(init_right));
  r.rho_mu = MetaStrategy::uniform(1);
  r.rho_nu = MetaStrategy::uniform(1);
  refresh_payoff(r.payoff, r.mu, r.nu, payoff, seed, workers);

  for (int t = 1; t <= iterations; ++t) {
    const std::string where = "iteration " + std::to_string(t) + ": ";
    try {
      if (t % 2 == 1) {
        const Opponent opp{r.nu.policies, r.rho_nu.weights()};
        r.mu.add({role, Side::kLeft, t}, br(opp, Side::kLeft, t));
      } else {
        const Opponent opp{r.mu.policies, r.rho_mu.weights()};
        r.nu.add({role, Side::kRight, t}, br(opp, Side::kRight, t));
      }
    } catch (const CapacityError& e) {
      throw CapacityError(where + e.what(), e.measured());
    } catch (const UsageError& e) {
      throw UsageError(where + e.what());
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
    refresh_payoff(r.payoff, r.mu, r.nu, payoff, seed, workers);
    if (solver == MetaSolver::kFsp) {
      r.rho_mu = solve_uniform(r.mu.size());
      r.rho_nu = solve_uniform(r.nu.size());
    } else {
      NashSolution n = solve_nash(r.payoff);
      r.rho_mu = std::move(n.row);
      r.rho_nu = std::move(n.col);
    }
    r.rho_mu_history.push_back(r.rho_mu);
    r.rho_nu_history.push_back(r.rho_nu);
    r.payoff_history.push_back(r.payoff);
  }
  return r;
}

// ---------------------------------------------------------------------------
// League

std::string_view to_string(LeagueRole r) {
  switch (r) {
    case LeagueRole::kMA: return "MA";
    case LeagueRole::kME: return "ME";
    case LeagueRole::kLE0: return "LE0";
    case LeagueRole::kLE1: return "LE1";
  }
  return "?";
}

LeagueRole parse_league_role(std::string_view text) {
  for (LeagueRole r : kLeagueRoles) {
    if (to_string(r) == text) return r;
  }
  throw UsageError("unknown league role '" + std::string(text) + "'");
}

std::vector<Exact> pfsp_weights(const std::vector<Exact>& win_rates) {
  if (win_rates.empty()) throw UsageError("PFSP over an empty candidate set");
  std::vector<Exact> w;
  Exact total = 0;
  for (const auto& p : win_rates) {
    if (p < 0 || p > 1) throw UsageError("win rate outside [0, 1]");
    w.push_back((1 - p) * (1 - p));
    total += w.back();
  }
  if (total == 0) return std::vector<Exact>(w.size(), frac(1, static_cast<long>(w.size())));
  for (auto& x : w) x /= total;
  return w;
}

LeagueRoster LeagueRoster::create(const QLearner& pretrained, int num_actions) {
  LeagueRoster r;
  r.init_table = pretrained.table();
  r.init_visits = pretrained.visits();
  r.init_ids = {PolicyId{"INIT", Side::kLeft, 0}, PolicyId{"INIT", Side::kRight, 0}};
  auto init = std::make_shared<TabularPolicy>(greedy_policy(r.init_table, num_actions));
  r.init_policies = {init, init};
  for (Side s : {Side::kLeft, Side::kRight}) {
    for (LeagueRole role : kLeagueRoles) {
      LeagueAgent& a = r.agent(s, role);
      a.role = role;
      a.side = s;
      a.q = r.init_table;
      a.visits = r.init_visits;
    }
  }
  return r;
}

PolicyId LeagueRoster::current(Side s, LeagueRole r) const {
  const LeagueAgent& a = agent(s, r);
  return a.checkpoints.empty() ? init_ids[index(s)] : a.checkpoints.back();
}

Population LeagueRoster::population() const {
  Population p;
  for (int s = 0; s < 2; ++s) p.add(init_ids[s], init_policies[s]);
  for (const PolicyId& id : creation_order) p.add(id, policy(id));
  return p;
}

PolicyPtr LeagueRoster::policy(const PolicyId& id) const {
  for (int s = 0; s < 2; ++s) {
    if (init_ids[s] == id) return init_policies[s];
  }
  for (const auto& side : agents) {
    for (const LeagueAgent& a : side) {
      for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
        if (a.checkpoints[i] == id) return a.snapshots[i];
      }
    }
  }
  throw UsageError("policy " + id.name() + " is not in the league");
}

namespace {

// Win rate of the learner (playing `side`) against an opposite-side policy.
Exact learner_rate(const PayoffMatrix& p, const PolicyId& learner, Side side,
                   const PolicyId& opp) {
  const auto index_of = [&](const PolicyId& id, bool row) {
    const auto i = row ? p.row_index(id) : p.col_index(id);
    if (!i) throw UsageError("policy " + id.name() + " is missing from the payoff matrix");
    return *i;
  };
  if (side == Side::kLeft) return p.win_rate(index_of(learner, true), index_of(opp, false));
  return 1 - p.win_rate(index_of(opp, true), index_of(learner, false));
}

}  // namespace

MixturePolicy league_step(const LeagueRoster& roster, Side side, LeagueRole role,
                          const PayoffMatrix& p, const LeagueParams& params) {
  if (static_cast<int>(role) < 0 || static_cast<int>(role) > 3) {
    throw UsageError("role is not in the roster");
  }
  const Side opp = other(side);
  const PolicyId me = roster.current(side, role);

  std::vector<PolicyId> ids;
  std::vector<Exact> weights;
  const auto add = [&](const PolicyId& id, const Exact& w) {
    if (w == 0) return;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == id) {
        weights[i] += w;
        return;
      }
    }
    ids.push_back(id);
    weights.push_back(w);
  };
  const auto add_pfsp = [&](const std::vector<PolicyId>& cands, const Exact& mass) {
    std::vector<Exact> rates;
    for (const auto& c : cands) rates.push_back(learner_rate(p, me, side, c));
    const auto w = pfsp_weights(rates);
    for (std::size_t i = 0; i < cands.size(); ++i) add(cands[i], mass * w[i]);
  };

  std::vector<PolicyId> league = {roster.init_ids[index(opp)]};
  std::vector<PolicyId> exploiters;
  for (const PolicyId& id : roster.creation_order) {
    if (id.side != opp) continue;
    league.push_back(id);
    if (id.role != "MA") exploiters.push_back(id);
  }

  switch (role) {
    case LeagueRole::kMA: {
      add(roster.current(opp, LeagueRole::kMA), params.self_play);
      if (exploiters.empty()) {
        add_pfsp(league, params.pfsp_all + params.pfsp_exploiters);
      } else {
        add_pfsp(league, params.pfsp_all);
        add_pfsp(exploiters, params.pfsp_exploiters);
      }
      break;
    }
    case LeagueRole::kME: {
      const PolicyId target = roster.current(opp, LeagueRole::kMA);
      if (learner_rate(p, me, side, target) < params.me_struggle) {
        std::vector<PolicyId> recent = {target};
        const auto& cps = roster.agent(opp, LeagueRole::kMA).checkpoints;
        for (int i = static_cast<int>(cps.size()) - 2;
             i >= 0 && static_cast<int>(recent.size()) < params.me_recent; --i) {
          recent.push_back(cps[i]);
        }
        for (const auto& id : recent) add(id, frac(1, static_cast<long>(recent.size())));
      } else {
        add(target, Exact(1));
      }
      break;
    }
    case LeagueRole::kLE0:
    case LeagueRole::kLE1:
      add_pfsp(league, Exact(1));
      break;
  }

  MixturePolicy m;
  m.ids = ids;
  for (const auto& id : ids) m.components.push_back(roster.policy(id));
  m.weights = MetaStrategy(weights);
  return m;
}

LeagueResult run_league(const EngineConfig& config, int cycles, const LearnConfig& lc,
                        const QLearner& pretrained, const PayoffFn& payoff, std::uint64_t seed,
                        const LeagueParams& params, int workers) {
  if (cycles < 0) throw UsageError("cycles must be >= 0");
  if (lc.budget_steps < 1) throw UsageError("league training needs budget_steps >= 1");
  lc.validate();
  const int n = static_cast<int>(config.legal_actions().size());
  LeagueResult r{LeagueRoster::create(pretrained, n), {}};
  LeagueRoster& roster = r.roster;
  Population pop = roster.population();
  refresh_payoff(r.payoff, pop, pop, payoff, seed, workers);

  for (int cycle = 1; cycle <= cycles; ++cycle) {
    // Every agent in a cycle trains against the league as it stood when
    // the cycle began.
    const PayoffMatrix snapshot = r.payoff;
    const LeagueRoster frozen = roster;
    for (LeagueRole role : kLeagueRoles) {
      for (Side side : {Side::kLeft, Side::kRight}) {
        const MixturePolicy mix = league_step(frozen, side, role, snapshot, params);
        LeagueAgent& a = roster.agent(side, role);
        LearnConfig l = lc;
        l.seed = derive_seed(seed, static_cast<std::uint64_t>(cycle),
                             static_cast<std::uint64_t>(index(side)),
                             static_cast<std::uint64_t>(role) + 1);
        QLearner q(config, side, l);
        q.set_table(a.q, a.visits);
        q.train(Opponent::from(mix), lc.budget_steps);
        a.q = q.table();
        a.visits = q.visits();
        a.steps += lc.budget_steps;
        PolicyId id{std::string(to_string(role)), side, a.steps};
        a.checkpoints.push_back(id);
        a.snapshots.push_back(std::make_shared<TabularPolicy>(q.policy()));
        roster.creation_order.push_back(id);
      }
    }
    pop = roster.population();
    refresh_payoff(r.payoff, pop, pop, payoff, seed, workers);
    for (Side side : {Side::kLeft, Side::kRight}) {
      LeagueAgent& me = roster.agent(side, LeagueRole::kME);
      const Exact rate = learner_rate(r.payoff, me.checkpoints.back(), side,
                                      roster.current(other(side), LeagueRole::kMA));
      if (rate >= params.me_reset) {
        me.q = roster.init_table;
        me.visits = roster.init_visits;
        ++me.resets;
      }
    }
  }
  return r;
}

}  // namespace arenaladder
