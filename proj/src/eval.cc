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
#include "arenaladder/eval.h"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "arenaladder/parallel.h"
#include "arenaladder/simulate.h"

namespace arenaladder {

std::vector<LadderRow> cpu_ladder(const EngineConfig& config, const Policy& policy, Side side,
                                  const std::vector<int>& levels, int matches,
                                  std::uint64_t seed, int workers) {
  if (matches < 1) throw UsageError("ladder needs matches >= 1");
  std::vector<LadderRow> rows(levels.size());
  parallel_for(levels.size(), workers, [&](std::size_t i) {
    const auto cpu = std::make_shared<ScriptedCPU>(levels[i], config);
    rows[i].level = levels[i];
    rows[i].stats = evaluate_matches(config, policy, side, Opponent::single(cpu), matches,
                                     derive_seed(seed, static_cast<std::uint64_t>(levels[i])));
  });
  return rows;
}

Opponent cpu_mixture(const EngineConfig& config, const std::vector<int>& levels) {
  if (levels.empty()) throw UsageError("cpu_mixture: no levels");
  Opponent o;
  for (int level : levels) {
    o.components.push_back(std::make_shared<ScriptedCPU>(level, config));
    o.weights.push_back(frac(1, static_cast<long>(levels.size())));
  }
  return o;
}

QLearner pretrain(const EngineConfig& config, const LearnConfig& lc,
                  const std::vector<int>& levels) {
  QLearner q(config, Side::kLeft, lc);
  q.train(cpu_mixture(config, levels), lc.budget_steps);
  return q;
}

double elo_expected(double elo_a, double elo_b) {
  return 1.0 / (1.0 + std::pow(10.0, (elo_b - elo_a) / 400.0));
}

std::pair<double, double> elo_update(double elo_a, double elo_b, Outcome a_result, double k) {
  if (!(k > 0)) throw UsageError("elo k must be > 0");
  const double s = a_result == Outcome::kLeftWin ? 1.0 : a_result == Outcome::kDraw ? 0.5 : 0.0;
  const double delta = k * (s - elo_expected(elo_a, elo_b));
  return {elo_a + delta, elo_b - delta};
}

RatingTable::RatingTable(double k, double initial) : k_(k), initial_(initial) {
  if (!(k > 0)) throw UsageError("elo k must be > 0");
}

RatingTable::Entry& RatingTable::entry(const PolicyId& id) {
  auto [it, fresh] = entries_.try_emplace(id.name(), Entry{id, initial_, 0});
  return it->second;
}

void RatingTable::add(const PolicyId& id) { entry(id); }

double RatingTable::rating(const PolicyId& id) const {
  auto it = entries_.find(id.name());
  return it == entries_.end() ? initial_ : it->second.elo;
}

int RatingTable::matches(const PolicyId& id) const {
  auto it = entries_.find(id.name());
  return it == entries_.end() ? 0 : it->second.matches;
}

void RatingTable::record(const PolicyId& a, const PolicyId& b, Outcome outcome) {
  if (a == b) throw UsageError("a policy cannot be rated against itself");
  Entry& ea = entry(a);
  Entry& eb = entry(b);
  EloRecord rec{a, b, outcome, ea.elo, eb.elo, 0, 0};
  std::tie(ea.elo, eb.elo) = elo_update(ea.elo, eb.elo, outcome, k_);
  ++ea.matches;
  ++eb.matches;
  rec.a_after = ea.elo;
  rec.b_after = eb.elo;
  history_.push_back(std::move(rec));
}

double RatingTable::sum() const {
  double s = 0;
  for (const auto& [name, e] : entries_) s += e.elo;
  return s;
}

std::vector<std::pair<PolicyId, double>> RatingTable::sorted() const {
  std::vector<std::pair<PolicyId, double>> out;
  for (const auto& [name, e] : entries_) out.emplace_back(e.id, e.elo);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  return out;
}

void RatingTable::write_csv(std::ostream& out) const {
  out << "rank,policy,elo,matches\n";
  int rank = 1;
  for (const auto& [id, elo] : sorted()) {
    out << rank++ << ',' << id.name() << ',' << std::fixed << std::setprecision(3) << elo
        << std::defaultfloat << ',' << matches(id) << '\n';
  }
}

RatingTable run_tournament(const Population& entrants, int rounds, double k,
                           const EngineConfig& config, std::uint64_t seed, int workers) {
  const std::size_t n = entrants.size();
  if (n < 2) throw UsageError("a tournament needs at least two entrants");
  if (rounds < 0) throw UsageError("rounds must be >= 0");
  struct Fixture {
    std::size_t a, b;
    std::uint64_t seed;
  };
  std::vector<Fixture> schedule;
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) schedule.push_back({i, j, derive_seed(seed, r, i, j)});
      }
    }
  }
  std::vector<Outcome> outcomes(schedule.size());
  parallel_for(schedule.size(), workers, [&](std::size_t m) {
    const Fixture& f = schedule[m];
    outcomes[m] =
        play_match(config, *entrants.policies[f.a], *entrants.policies[f.b], f.seed).outcome;
  });
  RatingTable table(k);
  for (const PolicyId& id : entrants.ids) table.add(id);
  for (std::size_t m = 0; m < schedule.size(); ++m) {
    table.record(entrants.ids[schedule[m].a], entrants.ids[schedule[m].b], outcomes[m]);
  }
  return table;
}

std::string_view to_string(ExploitMethod m) { return m == ExploitMethod::kExact ? "exact" : "rl"; }

ExploitMethod parse_exploit_method(std::string_view text) {
  if (text == "exact") return ExploitMethod::kExact;
  if (text == "rl") return ExploitMethod::kRL;
  throw UsageError("unknown exploit method '" + std::string(text) + "' (valid: exact, rl)");
}

void ExploitReport::write(std::ostream& out) const {
  out << "target=" << target.name() << '\n'
      << "side=" << to_string(side) << '\n'
      << "method=" << to_string(method) << '\n'
      << "exploit_winrate=" << exploit_winrate << '\n'
      << "exploit_winrate_decimal=" << std::setprecision(12) << exploit_winrate.get_d() << '\n'
      << "exploit_gap=" << exploit_gap << '\n'
      << "matches=" << matches << '\n'
      << "stderr=" << std_error << '\n'
      << "steps=" << steps << '\n'
      << "converged=" << (converged ? "true" : "false") << '\n'
      << std::defaultfloat;
}

ExploitReport rl_exploitability(const EngineConfig& config, const Opponent& target, Side side,
                                PolicyId id, const LearnConfig& lc, const ExploitOptions& opts) {
  lc.validate();
  if (opts.matches < 1 || opts.window_matches < 1 || opts.windows < 1 ||
      opts.plateau_windows < 1) {
    throw UsageError("exploit options must be positive");
  }
  const Side responder = other(side);
  QLearner learner(config, responder, lc);
  TabularPolicy best = learner.policy();
  double best_rate = -1;
  std::vector<double> best_after;  // best window rate after each window
  bool converged = false;
  const std::int64_t window = std::max<std::int64_t>(1, lc.budget_steps / opts.windows);
  for (int w = 0; learner.steps() < lc.budget_steps; ++w) {
    learner.train(target, std::min(window, lc.budget_steps - learner.steps()));
    TabularPolicy p = learner.policy();
    const double rate = evaluate_matches(config, p, responder, target, opts.window_matches,
                                         derive_seed(lc.seed, 0x3a11, w))
                            .win_rate.get_d();
    if (rate > best_rate) {
      best_rate = rate;
      best = std::move(p);
    }
    best_after.push_back(best_rate);
    const std::size_t k = static_cast<std::size_t>(opts.plateau_windows);
    if (best_after.size() > k &&
        best_after.back() - best_after[best_after.size() - 1 - k] < opts.plateau) {
      converged = true;
      break;
    }
  }
  const EvalStats st = evaluate_matches(config, best, responder, target, opts.matches,
                                        derive_seed(lc.seed, 0xf1a1));
  ExploitReport r;
  r.target = std::move(id);
  r.side = side;
  r.method = ExploitMethod::kRL;
  r.exploit_winrate = st.win_rate;
  r.exploit_gap = 2 * st.win_rate - 1;
  r.matches = st.matches;
  r.std_error = st.std_error;
  r.steps = learner.steps();
  r.converged = converged;
  return r;
}

ExploitReport exploitability(const EngineConfig& config, const Opponent& target, Side side,
                             PolicyId id, ExploitMethod method, const LearnConfig& lc,
                             const ExploitOptions& opts) {
  if (method == ExploitMethod::kExact) {
    return exact_exploitability(BrawlGame(config), target, side, std::move(id), opts.cap);
  }
  return rl_exploitability(config, target, side, std::move(id), lc, opts);
}

MetaStrategy curriculum_weights(const std::vector<Exact>& win_rates) {
  if (win_rates.empty()) throw UsageError("curriculum needs at least one level");
  std::vector<Exact> w;
  Exact total = 0;
  for (const Exact& p : win_rates) {
    if (p < 0 || p > 1) throw UsageError("win rate " + p.get_str() + " is outside [0, 1]");
    w.push_back(1 - p);
    total += w.back();
  }
  if (total == 0) return MetaStrategy::uniform(w.size());
  for (Exact& x : w) x /= total;
  return MetaStrategy(std::move(w));
}

CurriculumResult full_game_train(const EngineConfig& config, const std::vector<int>& levels,
                                 const LearnConfig& lc, const CurriculumOptions& opts,
                                 int workers) {
  if (levels.empty()) throw UsageError("curriculum needs at least one level");
  if (opts.epochs < 0 || opts.eval_matches < 1 || opts.final_matches < 0) {
    throw UsageError("curriculum options out of range");
  }
  lc.validate();
  std::vector<PolicyPtr> cpus;
  for (int level : levels) cpus.push_back(std::make_shared<ScriptedCPU>(level, config));
  QLearner learner(config, Side::kLeft, lc);
  CurriculumResult r{learner.policy(), {}, {}, {}, 0};

  const auto rates_vs_levels = [&](const TabularPolicy& p, int matches, std::uint64_t s) {
    std::vector<Exact> rates(levels.size());
    parallel_for(levels.size(), workers, [&](std::size_t i) {
      rates[i] = evaluate_matches(config, p, Side::kLeft, Opponent::single(cpus[i]), matches,
                                  derive_seed(s, static_cast<std::uint64_t>(levels[i])))
                     .win_rate;
    });
    return rates;
  };

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    const std::vector<Exact> rates =
        rates_vs_levels(learner.policy(), opts.eval_matches, derive_seed(lc.seed, 0xc0, epoch));
    MetaStrategy schedule = curriculum_weights(rates);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      r.curves.push_back({epoch, levels[i], rates[i].get_d(), schedule[i].get_d()});
    }
    learner.train(Opponent{cpus, schedule.weights()}, lc.budget_steps);
    r.schedules.push_back(std::move(schedule));
  }
  r.policy = learner.policy();
  r.steps = learner.steps();
  if (opts.epochs > 0 && opts.final_matches > 0) {
    for (const Exact& x : rates_vs_levels(r.policy, opts.final_matches, derive_seed(lc.seed, 0xf0))) {
      r.final_win_rates.push_back(x.get_d());
    }
  }
  return r;
}

void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& curves) {
  out << "epoch,level,win_rate,schedule_weight\n";
  for (const CurvePoint& c : curves) {
    out << c.epoch << ',' << c.level << ',' << std::setprecision(12) << c.win_rate << ','
        << c.schedule_weight << '\n';
  }
  out << std::defaultfloat;
}

}  // namespace arenaladder
