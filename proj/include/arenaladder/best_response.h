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

// Exact best responses and exact policy evaluation by backward induction
// over the reachable state graph, in arbitrary-precision rationals.
//
// Against a mixture whose component is drawn once per episode, the
// responder cannot see which component it faces, so the solver runs over
// (state, posterior over components). The posterior is updated by Bayes'
// rule on the opponent's observed behaviour, which in MiniBrawl is fully
// captured by the successor state. The resulting value is the best value
// achievable by any history-dependent responder. The returned tabular
// policy can only condition on the current observation; it starts from the
// action chosen at the most probable posterior reached at each observation
// and is then improved by reach-weighted backward passes. Its own exact
// value is reported as markov_value (equal to value whenever the opponent
// is a single policy).

#ifndef ARENALADDER_BEST_RESPONSE_H_
#define ARENALADDER_BEST_RESPONSE_H_

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "arenaladder/game.h"
#include "arenaladder/policy.h"

namespace arenaladder {

inline constexpr std::size_t kDefaultBRCap = 2'000'000;

// A fixed opponent: either one policy or a per-episode mixture.
struct Opponent {
  std::vector<PolicyPtr> components;
  std::vector<Exact> weights;

  static Opponent single(PolicyPtr p) { return {{std::move(p)}, {Exact(1)}}; }
  static Opponent from(const MixturePolicy& m) {
    m.validate();
    return {m.components, m.weights.weights()};
  }
};

struct BRResult {
  TabularPolicy policy;
  Exact value;         // responder's expected sparse reward in [-1, 1]
  Exact win_prob;      // P(win) + P(draw) / 2 = (1 + value) / 2
  Exact markov_value;  // exact value of `policy` against the opponent
  std::size_t nodes = 0;
};

namespace internal {

template <MarkovGame G>
class PairEvaluator {
 public:
  PairEvaluator(const G& game, const Policy& left, const Policy& right)
      : game_(game), left_(left), right_(right) {}

  Exact run() { return value(game_.initial()); }

 private:
  const std::vector<Exact>& dist(const Policy& p, const Observation& o,
                                 std::unordered_map<ObsKey, std::vector<Exact>>& cache) {
    auto [it, inserted] = cache.try_emplace(o.key());
    if (inserted) policy_distribution<Exact>(p, o, it->second);
    return it->second;
  }

  Exact value(const typename G::State& s) {
    if (game_.terminal(s)) return game_.left_value(s);
    std::string k = game_.key(s);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    const auto& pl = dist(left_, game_.observation(s, Side::kLeft), cache_l_);
    const auto& pr = dist(right_, game_.observation(s, Side::kRight), cache_r_);
    const std::vector<Exact> dl = pl;  // copies: recursion may rehash caches
    const std::vector<Exact> dr = pr;
    Exact v = 0;
    const int n = game_.num_actions();
    for (int a = 0; a < n; ++a) {
      if (dl[a] == 0) continue;
      for (int b = 0; b < n; ++b) {
        if (dr[b] == 0) continue;
        v += dl[a] * dr[b] * value(game_.next(s, a, b));
      }
    }
    memo_.emplace(std::move(k), v);
    return v;
  }

  const G& game_;
  const Policy& left_;
  const Policy& right_;
  std::unordered_map<std::string, Exact> memo_;
  std::unordered_map<ObsKey, std::vector<Exact>> cache_l_;
  std::unordered_map<ObsKey, std::vector<Exact>> cache_r_;
};

template <MarkovGame G>
class BeliefSolver {
 public:
  BeliefSolver(const G& game, const Opponent& opp, Side responder, std::size_t cap)
      : game_(game), opp_(opp), responder_(responder), cap_(cap),
        caches_(opp.components.size()) {}

  BRResult run() {
    std::vector<Exact> belief = opp_.weights;
    Exact total = 0;
    for (const auto& w : belief) total += w;
    for (auto& w : belief) w /= total;
    const int root = solve(game_.initial(), belief);
    BRResult r{TabularPolicy(game_.num_actions()), Exact(0), Exact(0), Exact(0), nodes_.size()};
    r.value = root < 0 ? terminal_value(game_.initial()) : nodes_[root].value;
    r.win_prob = (1 + r.value) / 2;
    project(root, r.policy);
    return r;
  }

 private:
  struct Child {
    int node;  // -1 for terminal successors
    double prob;
  };
  struct Node {
    Exact value;
    int action = 0;
    ObsKey obs = 0;
    std::vector<Child> children;  // under the chosen action
  };

  Exact terminal_value(const typename G::State& s) const {
    const Exact v = game_.left_value(s);
    return responder_ == Side::kLeft ? v : Exact(-v);
  }

  const std::vector<Exact>& dist(std::size_t i, const Observation& o) {
    auto [it, inserted] = caches_[i].try_emplace(o.key());
    if (inserted) policy_distribution<Exact>(*opp_.components[i], o, it->second);
    return it->second;
  }

  static std::string belief_key(const std::vector<Exact>& b) {
    if (b.size() == 1) return {};
    std::string k;
    for (const auto& w : b) {
      k += w.get_str();
      k += ',';
    }
    return k;
  }

  // Returns the node index, or -1 for a terminal state.
  int solve(const typename G::State& s, const std::vector<Exact>& belief) {
    if (game_.terminal(s)) return -1;
    const std::string skey = game_.key(s);
    std::string key = skey;
    key += '|';
    key += belief_key(belief);
    if (auto it = index_.find(key); it != index_.end()) return it->second;

    const Observation own = game_.observation(s, responder_);
    const Observation theirs = game_.observation(s, other(responder_));
    if (auto [it, inserted] = obs_state_.try_emplace(own.key(), skey);
        !inserted && it->second != skey) {
      throw Error(
          "responder observation does not determine the state; exact best response "
          "needs lossless observations (hp_buckets > max_hp, timer_buckets > horizon, "
          "no sequence specials, no projectiles)");
    }

    const std::size_t m = belief.size();
    std::vector<std::vector<Exact>> pi(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (belief[i] != 0) pi[i] = dist(i, theirs);
    }

    const int n = game_.num_actions();
    struct Succ {
      typename G::State state;
      std::vector<Exact> weight;
    };
    Exact best_value;
    int best_action = -1;
    std::vector<std::pair<int, Exact>> best_children;
    std::vector<Exact> best_terminal_mass;
    for (int b = 0; b < n; ++b) {
      std::map<std::string, Succ> succ;
      for (int a = 0; a < n; ++a) {
        bool any = false;
        for (std::size_t i = 0; i < m && !any; ++i) any = belief[i] != 0 && pi[i][a] != 0;
        if (!any) continue;
        typename G::State nx = responder_ == Side::kLeft ? game_.next(s, b, a) : game_.next(s, a, b);
        std::string nk = game_.key(nx);
        auto [it, inserted] = succ.try_emplace(std::move(nk), Succ{std::move(nx), {}});
        if (inserted) it->second.weight.assign(m, Exact(0));
        for (std::size_t i = 0; i < m; ++i) {
          if (belief[i] != 0 && pi[i][a] != 0) it->second.weight[i] += belief[i] * pi[i][a];
        }
      }
      Exact q = 0;
      std::vector<std::pair<int, Exact>> children;
      for (auto& [nk, sc] : succ) {
        Exact mass = 0;
        for (const auto& w : sc.weight) mass += w;
        if (game_.terminal(sc.state)) {
          q += mass * terminal_value(sc.state);
          children.emplace_back(-1, mass);
          continue;
        }
        for (auto& w : sc.weight) w /= mass;
        const int child = solve(sc.state, sc.weight);
        q += mass * nodes_[child].value;
        children.emplace_back(child, mass);
      }
      if (best_action < 0 || q > best_value) {
        best_value = q;
        best_action = b;
        best_children = std::move(children);
      }
    }

    Node node;
    node.value = best_value;
    node.action = best_action;
    node.obs = own.key();
    for (const auto& [c, mass] : best_children) node.children.push_back({c, mass.get_d()});
    nodes_.push_back(std::move(node));
    const int id = static_cast<int>(nodes_.size()) - 1;
    index_.emplace(std::move(key), id);
    if (nodes_.size() > cap_) {
      throw CapacityError("best-response state space exceeds cap of " + std::to_string(cap_),
                          nodes_.size());
    }
    return id;
  }

  // Nodes are stored in post-order, so reverse index order is topological.
  void project(int root, TabularPolicy& policy) {
    if (root < 0) return;
    std::vector<double> reach(nodes_.size(), 0.0);
    reach[root] = 1.0;
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
      for (const auto& c : nodes_[i].children) {
        if (c.node >= 0) reach[c.node] += reach[i] * c.prob;
      }
    }
    std::unordered_map<ObsKey, int> chosen;
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
      auto [it, inserted] = chosen.try_emplace(nodes_[i].obs, i);
      if (!inserted && reach[i] > reach[it->second]) it->second = i;
    }
    for (const auto& [obs, i] : chosen) policy.set_action(obs, nodes_[i].action);
  }

  const G& game_;
  const Opponent& opp_;
  Side responder_;
  std::size_t cap_;
  std::vector<std::unordered_map<ObsKey, std::vector<Exact>>> caches_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<ObsKey, std::string> obs_state_;
  std::vector<Node> nodes_;
};

// Improves an observation-measurable response to a mixture. Observations
// determine the state, so a tabular policy is one action per state. Each
// pass fixes the component reach probabilities of the current policy and
// re-chooses every action backwards to maximize the reach-weighted value;
// the best policy seen is kept.
template <MarkovGame G>
class MarkovRefiner {
 public:
  MarkovRefiner(const G& game, const Opponent& opp, Side responder)
      : game_(game), opp_(opp), responder_(responder), m_(opp.components.size()),
        n_(game.num_actions()) {
    for (const auto& w : opp.weights) weights_.push_back(w.get_d());
    root_ = build(game_.initial());
  }

  // Returns the number of passes that changed the policy.
  int refine(TabularPolicy& policy, int max_passes = 20) {
    std::vector<int> act(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& d = policy.get(nodes_[i].obs);
      act[i] = static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
    }
    double best = evaluate(act);
    std::vector<int> best_act = act;
    int changed_passes = 0;
    for (int pass = 0; pass < max_passes; ++pass) {
      if (!improve(act)) break;
      ++changed_passes;
      const double v = evaluate(act);
      if (v > best + 1e-12) {
        best = v;
        best_act = act;
      }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) policy.set_action(nodes_[i].obs, best_act[i]);
    return changed_passes;
  }

 private:
  struct Node {
    ObsKey obs = 0;
    std::vector<std::vector<double>> pi;  // [component][opponent action]
    std::vector<int> succ;                // [b * n + a]: node id, or -1 - terminal id
  };

  double terminal_value(const typename G::State& s) const {
    const double v = game_.left_value(s).get_d();
    return responder_ == Side::kLeft ? v : -v;
  }

  int build(const typename G::State& s) {
    std::string key = game_.key(s);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    Node node;
    node.obs = game_.observation(s, responder_).key();
    node.pi.resize(m_);
    const Observation theirs = game_.observation(s, other(responder_));
    for (std::size_t i = 0; i < m_; ++i) {
      std::vector<Exact> d;
      opp_.components[i]->distribution_exact(theirs, d);
      for (const auto& x : d) node.pi[i].push_back(x.get_d());
    }
    node.succ.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (int b = 0; b < n_; ++b) {
      for (int a = 0; a < n_; ++a) {
        bool any = false;
        for (std::size_t i = 0; i < m_ && !any; ++i) any = weights_[i] > 0 && node.pi[i][a] > 0;
        if (!any) continue;
        const auto nx = responder_ == Side::kLeft ? game_.next(s, b, a) : game_.next(s, a, b);
        if (game_.terminal(nx)) {
          terminals_.push_back(terminal_value(nx));
          node.succ[b * n_ + a] = -static_cast<int>(terminals_.size());
        } else {
          node.succ[b * n_ + a] = build(nx);
        }
      }
    }
    nodes_.push_back(std::move(node));
    const int id = static_cast<int>(nodes_.size()) - 1;
    index_.emplace(std::move(key), id);
    return id;
  }

  double child_value(int succ, std::size_t i, const std::vector<std::vector<double>>& v) const {
    return succ < 0 ? terminals_[-succ - 1] : v[succ][i];
  }

  // Per-component values under `act`, children before parents.
  std::vector<std::vector<double>> values(const std::vector<int>& act) const {
    std::vector<std::vector<double>> v(nodes_.size(), std::vector<double>(m_, 0.0));
    for (std::size_t s = 0; s < nodes_.size(); ++s) {
      const Node& nd = nodes_[s];
      for (std::size_t i = 0; i < m_; ++i) {
        double q = 0;
        for (int a = 0; a < n_; ++a) {
          if (nd.pi[i][a] > 0) q += nd.pi[i][a] * child_value(nd.succ[act[s] * n_ + a], i, v);
        }
        v[s][i] = q;
      }
    }
    return v;
  }

  double evaluate(const std::vector<int>& act) const {
    const auto v = values(act);
    double total = 0;
    for (std::size_t i = 0; i < m_; ++i) total += weights_[i] * v[root_][i];
    return total;
  }

  bool improve(std::vector<int>& act) const {
    // Reach per component, parents first (reverse post-order).
    std::vector<std::vector<double>> reach(nodes_.size(), std::vector<double>(m_, 0.0));
    for (std::size_t i = 0; i < m_; ++i) reach[root_][i] = weights_[i];
    for (int s = static_cast<int>(nodes_.size()) - 1; s >= 0; --s) {
      const Node& nd = nodes_[s];
      for (std::size_t i = 0; i < m_; ++i) {
        if (reach[s][i] == 0) continue;
        for (int a = 0; a < n_; ++a) {
          const int c = nd.succ[act[s] * n_ + a];
          if (nd.pi[i][a] > 0 && c >= 0) reach[c][i] += reach[s][i] * nd.pi[i][a];
        }
      }
    }
    bool changed = false;
    std::vector<std::vector<double>> v(nodes_.size(), std::vector<double>(m_, 0.0));
    for (std::size_t s = 0; s < nodes_.size(); ++s) {
      const Node& nd = nodes_[s];
      double mass = 0;
      for (double r : reach[s]) mass += r;
      const std::vector<double>& w = mass > 0 ? reach[s] : weights_;
      int best_b = act[s];
      double best = -1e300;
      std::vector<double> best_q(m_);
      std::vector<double> q(m_);
      for (int b = 0; b < n_; ++b) {
        double total = 0;
        for (std::size_t i = 0; i < m_; ++i) {
          q[i] = 0;
          for (int a = 0; a < n_; ++a) {
            if (nd.pi[i][a] > 0) q[i] += nd.pi[i][a] * child_value(nd.succ[b * n_ + a], i, v);
          }
          total += w[i] * q[i];
        }
        // Keep the current action unless another is strictly better.
        const bool better = total > best + 1e-12 || (b == act[s] && total >= best - 1e-12);
        if (better) {
          best = total;
          best_b = b;
          best_q = q;
        }
      }
      if (best_b != act[s]) changed = true;
      act[s] = best_b;
      v[s] = best_q;
    }
    return changed;
  }

  const G& game_;
  const Opponent& opp_;
  Side responder_;
  std::size_t m_;
  int n_;
  std::vector<double> weights_;
  std::vector<Node> nodes_;
  std::vector<double> terminals_;
  std::unordered_map<std::string, int> index_;
  int root_ = 0;
};

}  // namespace internal

// Exact expected sparse reward of the left player.
template <MarkovGame G>
Exact evaluate_pair(const G& game, const Policy& left, const Policy& right) {
  return internal::PairEvaluator<G>(game, left, right).run();
}

// Exact expected sparse reward of `policy` playing `side` against the
// per-episode mixture.
template <MarkovGame G>
Exact evaluate_vs(const G& game, const Policy& policy, Side side, const Opponent& opp) {
  Exact total = 0;
  Exact mass = 0;
  for (std::size_t i = 0; i < opp.components.size(); ++i) {
    if (opp.weights[i] == 0) continue;
    const Exact v = side == Side::kLeft ? evaluate_pair(game, policy, *opp.components[i])
                                        : Exact(-evaluate_pair(game, *opp.components[i], policy));
    total += opp.weights[i] * v;
    mass += opp.weights[i];
  }
  return total / mass;
}

// Deterministic best response; ties go to the lowest action index. Throws
// CapacityError when more than `cap` (state, posterior) nodes are needed.
template <MarkovGame G>
BRResult exact_best_response(const G& game, const Opponent& opp, Side responder,
                             std::size_t cap = kDefaultBRCap) {
  if (opp.components.empty() || opp.components.size() != opp.weights.size()) {
    throw UsageError("opponent mixture is empty or malformed");
  }
  BRResult r = internal::BeliefSolver<G>(game, opp, responder, cap).run();
  if (opp.components.size() == 1) {
    r.markov_value = r.value;
  } else {
    if (r.nodes > 0) internal::MarkovRefiner<G>(game, opp, responder).refine(r.policy);
    r.markov_value = evaluate_vs(game, r.policy, responder, opp);
  }
  return r;
}

}  // namespace arenaladder

#endif  // ARENALADDER_BEST_RESPONSE_H_
