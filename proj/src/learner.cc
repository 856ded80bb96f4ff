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

#include "arenaladder/learner.h"

#include <algorithm>
#include <cmath>

#include "arenaladder/simulate.h"

namespace arenaladder {
namespace {

bool actionable_code(int code) {
  const Phase p = phase_of_code(code);
  return p == Phase::kNeutral || p == Phase::kCrouching;
}

int argmax(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

// Behaviour choice: a uniformly random action among the maximizers.
int argmax_random(const std::vector<double>& v, Rng& rng) {
  const double best = *std::max_element(v.begin(), v.end());
  int ties = 0;
  for (double x : v) ties += x == best;
  int pick = static_cast<int>(rng.below(ties));
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    if (v[i] == best && pick-- == 0) return i;
  }
  return 0;
}

std::size_t draw_component(const Opponent& opp, Rng& rng) {
  if (opp.components.size() == 1) return 0;
  double total = 0;
  for (const auto& w : opp.weights) total += w.get_d();
  const double u = rng.uniform() * total;
  double acc = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < opp.weights.size(); ++i) {
    const double w = opp.weights[i].get_d();
    if (w <= 0) continue;
    acc += w;
    last = i;
    if (u < acc) return i;
  }
  return last;
}

double step_reward(const GameState& prev, const GameState& next, Side side,
                   const EngineConfig& cfg, RewardMode mode) {
  if (mode == RewardMode::kDense) return to_double(dense_reward(prev, next, side, cfg));
  return to_double(sparse_rewards(next)[index(side)]);
}

}  // namespace

void LearnConfig::validate() const {
  if (budget_steps < 0) throw ConfigError("budget_steps must be >= 0");
  if (step_size <= Rational(0) || step_size > Rational(1)) {
    throw ConfigError("step_size must be in (0, 1]");
  }
  if (exploration < Rational(0) || exploration > Rational(1)) {
    throw ConfigError("exploration must be in [0, 1]");
  }
  if (step_ratio <= Rational(0)) throw ConfigError("step_ratio must be > 0");
}

TabularPolicy greedy_policy(const QTable& q, int num_actions) {
  TabularPolicy p(num_actions);
  for (const auto& [k, row] : q) p.set_action(k, argmax(row));
  return p;
}

QLearner::QLearner(const EngineConfig& config, Side side, LearnConfig lc)
    : config_(config), actions_(config.legal_actions()),
      num_actions_(static_cast<int>(actions_.size())), side_(side), lc_(lc),
      eta_(to_double(lc.step_size)), eps_(to_double(lc.exploration)),
      rng_(derive_seed(lc.seed, 0x51)) {
  lc_.validate();
}

std::vector<double>& QLearner::row(ObsKey k) {
  auto [it, inserted] = q_.try_emplace(k);
  if (inserted) it->second.assign(num_actions_, 0.0);
  return it->second;
}

void QLearner::update(ObsKey k, int a, double target) {
  auto [it, inserted] = visits_.try_emplace(k);
  if (inserted) it->second.assign(num_actions_, 0);
  const double n = ++it->second[a];
  const double rate = std::max(eta_, 1.0 / n);
  auto& q = row(k)[a];
  q += rate * (target - q);
}

void QLearner::train(const Opponent& opp, std::int64_t steps) {
  const std::int64_t target = steps_ + steps;
  const Side them = other(side_);
  while (steps_ < target) {
    const Policy& o = *opp.components[draw_component(opp, rng_)];
    GameState s = reset(config_);
    bool pending = false;
    ObsKey pk = 0;
    int pa = 0;
    double acc = 0;
    while (!s.terminal && steps_ < target) {
      const Observation own = observe(s, side_, config_);
      int a = 0;
      if (actionable_code(own.own_phase)) {
        const ObsKey k = own.key();
        auto& r = row(k);
        if (pending) update(pk, pa, acc + *std::max_element(r.begin(), r.end()));
        auto& cur = row(k);
        a = rng_.uniform() < eps_ ? static_cast<int>(rng_.below(num_actions_))
                                   : argmax_random(cur, rng_);
        pending = true;
        pk = k;
        pa = a;
        acc = 0;
      }
      const int b = o.act(observe(s, them, config_), rng_);
      GameState n = side_ == Side::kLeft ? advance(s, actions_[a], actions_[b], config_)
                                         : advance(s, actions_[b], actions_[a], config_);
      acc += step_reward(s, n, side_, config_, lc_.reward);
      s = std::move(n);
      ++steps_;
    }
    if (pending) {
      double boot = 0;
      if (!s.terminal) {
        const auto& r = row(observe(s, side_, config_).key());
        boot = *std::max_element(r.begin(), r.end());
      }
      update(pk, pa, acc + boot);
    }
  }
}

EvalStats evaluate_matches(const EngineConfig& config, const Policy& policy, Side side,
                           const Opponent& opp, int matches, std::uint64_t seed) {
  EvalStats st;
  st.matches = matches;
  double sum = 0;
  double sum_sq = 0;
  int half_points_total = 0;
  for (int m = 0; m < matches; ++m) {
    Rng pick(derive_seed(seed, m, 7));
    const Policy& o = *opp.components[draw_component(opp, pick)];
    const std::uint64_t ms = derive_seed(seed, m);
    const MatchResult r = side == Side::kLeft ? play_match(config, policy, o, ms)
                                              : play_match(config, o, policy, ms);
    const int hp = half_points(r.outcome, side);
    half_points_total += hp;
    if (hp == 2) ++st.wins;
    if (hp == 1) ++st.draws;
    sum += hp / 2.0;
    sum_sq += (hp / 2.0) * (hp / 2.0);
  }
  if (matches > 0) {
    st.win_rate = frac(half_points_total, 2L * matches);
    const double mean = sum / matches;
    const double var = std::max(0.0, sum_sq / matches - mean * mean);
    st.std_error = std::sqrt(var / matches);
  }
  return st;
}

RLBestResponse rl_best_response(const EngineConfig& config, const Opponent& opp,
                                Side responder, const LearnConfig& lc, int eval_matches) {
  QLearner learner(config, responder, lc);
  learner.train(opp, lc.budget_steps);
  RLBestResponse r{learner.policy(), Exact(0), Exact(0), 0.0, eval_matches, learner.table()};
  const EvalStats st = evaluate_matches(config, r.policy, responder, opp, eval_matches,
                                        derive_seed(lc.seed, 0xe7a1));
  r.win_prob = st.win_rate;
  r.value = 2 * r.win_prob - 1;
  r.std_error = st.std_error;
  return r;
}

namespace {

// One side of independent learning: expected-SARSA critic plus a policy
// table nudged toward the critic's greedy action.
struct IndependentSide {
  Side side;
  double eta;
  double eps;
  int n;
  Rng rng;
  QTable q;
  std::unordered_map<ObsKey, std::vector<double>> pi;
  double change = 0;
  bool pending = false;
  ObsKey pk = 0;
  int pa = 0;
  double acc = 0;

  std::vector<double>& qrow(ObsKey k) {
    auto [it, inserted] = q.try_emplace(k);
    if (inserted) it->second.assign(n, 0.0);
    return it->second;
  }
  std::vector<double>& prow(ObsKey k) {
    auto [it, inserted] = pi.try_emplace(k);
    if (inserted) it->second.assign(n, 1.0 / n);
    return it->second;
  }
  double expected(ObsKey k) {
    const auto& qr = qrow(k);
    const auto& pr = prow(k);
    double v = 0;
    for (int i = 0; i < n; ++i) v += pr[i] * qr[i];
    return v;
  }
  void close(double boot) {
    if (!pending) return;
    auto& qr = qrow(pk);
    qr[pa] += eta * (acc + boot - qr[pa]);
    auto& pr = prow(pk);
    const int g = argmax(qr);
    for (int i = 0; i < n; ++i) {
      const double target = i == g ? 1.0 : 0.0;
      const double np = (1 - eta) * pr[i] + eta * target;
      change += std::abs(np - pr[i]);
      pr[i] = np;
    }
    pending = false;
  }
  int decide(ObsKey k) {
    if (pending) close(expected(k));
    int a;
    if (rng.uniform() < eps) {
      a = static_cast<int>(rng.below(n));
    } else {
      a = sample_index(prow(k), rng);
    }
    pending = true;
    pk = k;
    pa = a;
    acc = 0;
    return a;
  }
  TabularPolicy export_policy() const {
    TabularPolicy p(n);
    std::vector<ObsKey> keys;
    for (const auto& [k, v] : pi) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (ObsKey k : keys) {
      std::vector<double> d = pi.at(k);
      double s = 0;
      for (double x : d) s += x;
      for (double& x : d) x = (1 - eps) * x / s + eps / n;
      p.set(k, std::move(d));
    }
    return p;
  }
};

}  // namespace

IndependentResult independent_learn(const EngineConfig& config, const LearnConfig& lc_left,
                                    const LearnConfig& lc_right, const TabularPolicy* init_left,
                                    const TabularPolicy* init_right) {
  lc_left.validate();
  lc_right.validate();
  const auto actions = config.legal_actions();
  const int n = static_cast<int>(actions.size());
  std::array<IndependentSide, 2> sides = {
      IndependentSide{Side::kLeft, to_double(lc_left.step_size), to_double(lc_left.exploration),
                      n, Rng(derive_seed(lc_left.seed, 0x1d)), {}, {}},
      IndependentSide{Side::kRight, to_double(lc_right.step_size),
                      to_double(lc_right.exploration), n, Rng(derive_seed(lc_right.seed, 0x1d)),
                      {}, {}}};
  const TabularPolicy* init[2] = {init_left, init_right};
  for (int i = 0; i < 2; ++i) {
    if (!init[i]) continue;
    for (ObsKey k : init[i]->sorted_keys()) sides[i].pi[k] = init[i]->get(k);
  }

  IndependentResult out{TabularPolicy(n), TabularPolicy(n), 0, 0, {}};
  const std::int64_t budget = lc_left.budget_steps;
  std::int64_t steps = 0;
  std::int64_t episode = 0;
  double score_sum = 0;
  while (steps < budget) {
    GameState s = reset(config);
    const double before[2] = {sides[0].change, sides[1].change};
    while (!s.terminal && steps < budget) {
      int act[2] = {0, 0};
      for (int i = 0; i < 2; ++i) {
        const Observation o = observe(s, sides[i].side, config);
        if (actionable_code(o.own_phase)) act[i] = sides[i].decide(o.key());
      }
      GameState nx = advance(s, actions[act[0]], actions[act[1]], config);
      for (int i = 0; i < 2; ++i) {
        sides[i].acc += step_reward(s, nx, sides[i].side, config, lc_left.reward);
      }
      s = std::move(nx);
      ++steps;
    }
    for (int i = 0; i < 2; ++i) {
      double boot = 0;
      if (!s.terminal) boot = sides[i].expected(observe(s, sides[i].side, config).key());
      sides[i].close(boot);
    }
    if (s.terminal) score_sum += half_points(*s.winner, Side::kLeft) / 2.0;
    ++episode;
    out.diagnostics.push_back({episode, steps, score_sum / episode,
                               sides[0].change - before[0], sides[1].change - before[1]});
  }
  out.left = sides[0].export_policy();
  out.right = sides[1].export_policy();
  if (init_left && budget == 0) out.left = *init_left;
  if (init_right && budget == 0) out.right = *init_right;
  out.cumulative_change_left = sides[0].change;
  out.cumulative_change_right = sides[1].change;
  return out;
}

std::pair<LearnConfig, LearnConfig> two_timescale(const LearnConfig& lc) {
  LearnConfig slow = lc;
  slow.step_size = lc.step_size * lc.step_ratio;
  if (slow.step_size > Rational(1)) slow.step_size = Rational(1);
  return {lc, slow};
}

}  // namespace arenaladder
