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

#include "arenaladder/policy.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace arenaladder {

void Policy::distribution_exact(const Observation& obs, std::vector<Exact>& out) const {
  std::vector<double> d(num_actions());
  distribution(obs, d);
  out.resize(d.size());
  Exact sum = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    out[i] = to_exact(d[i]);
    sum += out[i];
  }
  // Doubles summing to 1 within rounding; the exact solvers need exactly 1.
  if (sum != 1) {
    for (auto& p : out) p /= sum;
  }
}

int Policy::act(const Observation& obs, Rng& rng) const {
  double buf[64];
  std::vector<double> heap;
  std::span<double> probs;
  if (num_actions() <= 64) {
    probs = std::span<double>(buf, num_actions());
  } else {
    heap.resize(num_actions());
    probs = heap;
  }
  distribution(obs, probs);
  return sample_index(probs, rng);
}

int sample_index(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0;
  int last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0) continue;
    acc += probs[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;
}

// ---------------------------------------------------------------------------
// TabularPolicy

TabularPolicy::TabularPolicy(int num_actions)
    : num_actions_(num_actions), default_(num_actions, 1.0 / num_actions) {
  if (num_actions < 1) throw UsageError("policy needs at least one action");
}

TabularPolicy::TabularPolicy(int num_actions, std::vector<double> default_dist)
    : TabularPolicy(num_actions) {
  if (static_cast<int>(default_dist.size()) != num_actions) {
    throw UsageError("default distribution arity mismatch");
  }
  default_ = std::move(default_dist);
}

void TabularPolicy::distribution(const Observation& obs, std::span<double> out) const {
  const auto& d = get(obs.key());
  std::copy(d.begin(), d.end(), out.begin());
}

const std::vector<double>& TabularPolicy::get(ObsKey key) const {
  auto it = table_.find(key);
  return it == table_.end() ? default_ : it->second;
}

void TabularPolicy::set(ObsKey key, std::vector<double> dist) {
  if (static_cast<int>(dist.size()) != num_actions_) {
    throw UsageError("distribution has " + std::to_string(dist.size()) + " entries, expected " +
                     std::to_string(num_actions_));
  }
  double sum = 0;
  for (double p : dist) {
    if (!(p >= 0)) throw UsageError("negative or NaN probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw UsageError("distribution does not sum to 1");
  table_[key] = std::move(dist);
}

void TabularPolicy::set_action(ObsKey key, int action) {
  std::vector<double> d(num_actions_, 0.0);
  d.at(action) = 1.0;
  table_[key] = std::move(d);
}

std::vector<ObsKey> TabularPolicy::sorted_keys() const {
  std::vector<ObsKey> keys;
  keys.reserve(table_.size());
  for (const auto& [k, v] : table_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

TabularPolicy TabularPolicy::point_mass(int num_actions, int action) {
  std::vector<double> d(num_actions, 0.0);
  d.at(action) = 1.0;
  return TabularPolicy(num_actions, std::move(d));
}

// ---------------------------------------------------------------------------
// ScriptedCPU

ScriptedCPU::Params ScriptedCPU::params_for(int level) {
  if (level < 1 || level > 8) {
    throw UsageError("CPU level must be in 1..8 (got " + std::to_string(level) + ")");
  }
  return {frac(1 + level, 10), frac(30 + 7 * level, 100), frac(5 * level, 100),
          frac(level, 10)};
}

ScriptedCPU::ScriptedCPU(int level, const EngineConfig& config)
    : level_(level), params_(params_for(level)), config_(config),
      actions_(config.legal_actions()) {
  params_d_ = {params_.reaction_prob.get_d(), params_.aggression.get_d(),
               params_.special_prob.get_d(), params_.block_prob.get_d()};
}

ScriptedCPU cpu_policy(int level, const EngineConfig& config) {
  return ScriptedCPU(level, config);
}

template <class Scalar>
void ScriptedCPU::compute(const Observation& obs, std::vector<Scalar>& out,
                          const Scalar& react, const Scalar& aggr, const Scalar& special,
                          const Scalar& block) const {
  const int n = num_actions();
  out.assign(n, Scalar(0));
  std::vector<int> motions;
  std::vector<int> normals;
  std::vector<int> specials;
  int noop = -1;
  int defense = -1;
  int forward = -1;
  const int dist = obs.opp_pos - obs.own_pos;
  int best_attack = -1;
  int best_damage = -1;
  for (int i = 0; i < n; ++i) {
    const TransAction a = actions_[i];
    switch (a.kind()) {
      case TransAction::Kind::kNoop:
        noop = i;
        break;
      case TransAction::Kind::kMotion:
        motions.push_back(i);
        if (a.as_motion() == Motion::kDefense) defense = i;
        if (a.as_motion() == Motion::kForward) forward = i;
        break;
      case TransAction::Kind::kAttack: {
        const MoveData& d = config_.damage_table[static_cast<int>(a.as_attack())];
        if (d.range >= dist) {
          normals.push_back(i);
          if (d.damage > best_damage) {
            best_damage = d.damage;
            best_attack = i;
          }
        }
        break;
      }
      case TransAction::Kind::kSpecial: {
        const SpecialMove& s = config_.specials[a.special_id()];
        if (s.effect == SpecialEffect::kProjectile || s.data.range >= dist) {
          specials.push_back(i);
          if (s.data.damage > best_damage) {
            best_damage = s.data.damage;
            best_attack = i;
          }
        }
        break;
      }
    }
  }

  const auto add = [&](int i, const Scalar& w) { out[i] += w; };
  const auto add_uniform = [&](const std::vector<int>& idx, const Scalar& w) {
    const Scalar share = w / Scalar(static_cast<int>(idx.size()));
    for (int i : idx) out[i] += share;
  };
  const auto random_motion = [&](const Scalar& w) {
    if (!motions.empty()) {
      add_uniform(motions, w);
    } else if (noop >= 0) {
      add(noop, w);
    } else {
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      add_uniform(all, w);
    }
  };
  const auto approach = [&](const Scalar& w) {
    if (forward >= 0) {
      add(forward, w);
    } else {
      random_motion(w);
    }
  };

  const Phase own = phase_of_code(obs.own_phase);
  if (own != Phase::kNeutral && own != Phase::kCrouching) {
    // Inputs are ignored while busy.
    add(noop >= 0 ? noop : 0, Scalar(1));
    return;
  }

  const Phase opp = phase_of_code(obs.opp_phase);
  const int opp_move = pending_of_code(obs.opp_phase);
  bool threat = false;
  if ((opp == Phase::kStartup || opp == Phase::kActive) && opp_move != kNoMove) {
    const bool projectile =
        is_special_move(opp_move) &&
        config_.specials[opp_move - kNumAttacks].effect == SpecialEffect::kProjectile;
    threat = projectile || config_.move(opp_move).range >= dist;
  }
  if (obs.projectile_offset != Observation::kNoProjectile && obs.projectile_offset > 0 &&
      obs.projectile_offset <= 2) {
    threat = true;
  }
  const bool punish = opp == Phase::kRecovery || opp == Phase::kHitstun ||
                      opp == Phase::kBlockstun;

  Scalar rest(1);
  if (threat) {
    const Scalar w = react * block;
    if (defense >= 0) {
      add(defense, w);
    } else {
      random_motion(w);
    }
    random_motion(react - w);
    rest -= react;
  } else if (punish) {
    if (best_attack >= 0) {
      add(best_attack, react);
    } else {
      approach(react);
    }
    rest -= react;
  }

  const Scalar attack_mass = rest * aggr;
  if (!normals.empty() || !specials.empty()) {
    if (specials.empty()) {
      add_uniform(normals, attack_mass);
    } else if (normals.empty()) {
      add_uniform(specials, attack_mass);
    } else {
      add_uniform(specials, attack_mass * special);
      add_uniform(normals, attack_mass - attack_mass * special);
    }
  } else {
    approach(attack_mass);
  }
  random_motion(rest - attack_mass);
}

void ScriptedCPU::distribution(const Observation& obs, std::span<double> out) const {
  std::vector<double> d;
  compute<double>(obs, d, params_d_[0], params_d_[1], params_d_[2], params_d_[3]);
  std::copy(d.begin(), d.end(), out.begin());
}

void ScriptedCPU::distribution_exact(const Observation& obs, std::vector<Exact>& out) const {
  compute<Exact>(obs, out, params_.reaction_prob, params_.aggression, params_.special_prob,
                 params_.block_prob);
}

// ---------------------------------------------------------------------------
// MetaStrategy

MetaStrategy::MetaStrategy(std::vector<Exact> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw UsageError("meta-strategy over an empty population");
  Exact sum = 0;
  for (const auto& w : weights_) {
    if (w < 0) throw UsageError("negative meta-strategy weight");
    sum += w;
  }
  Exact err = sum - 1;
  if (abs(err) > Exact("1/1000000000000")) {
    throw UsageError("meta-strategy weights sum to " + std::to_string(sum.get_d()) +
                     ", not 1");
  }
  double acc = 0;
  for (auto& w : weights_) {
    w /= sum;
    acc += w.get_d();
    cumulative_.push_back(acc);
  }
}

MetaStrategy MetaStrategy::from_doubles(const std::vector<double>& weights) {
  std::vector<Exact> w;
  w.reserve(weights.size());
  for (double d : weights) w.push_back(to_exact(d));
  return MetaStrategy(std::move(w));
}

MetaStrategy MetaStrategy::uniform(std::size_t n) {
  return MetaStrategy(std::vector<Exact>(n, Exact(1, static_cast<unsigned long>(n))));
}

MetaStrategy MetaStrategy::point(std::size_t n, std::size_t i) {
  std::vector<Exact> w(n, Exact(0));
  w.at(i) = 1;
  return MetaStrategy(std::move(w));
}

std::vector<double> MetaStrategy::to_doubles() const {
  std::vector<double> out;
  for (const auto& w : weights_) out.push_back(w.get_d());
  return out;
}

std::size_t MetaStrategy::sample(Rng& rng) const {
  if (weights_.empty()) throw UsageError("sampling an empty meta-strategy");
  const double u = rng.uniform() * cumulative_.back();
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0) continue;
    last = i;
    if (u < cumulative_[i]) return i;
  }
  return last;
}

std::string MetaStrategy::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (i) s += ",";
    s += weights_[i].get_str();
  }
  return s;
}

// ---------------------------------------------------------------------------
// PolicyId / MixturePolicy

std::string PolicyId::name() const {
  return role + "_" + std::string(arenaladder::to_string(side)) + "_" +
         std::to_string(checkpoint);
}

PolicyId PolicyId::parse(std::string_view name) {
  const auto last = name.rfind('_');
  if (last == std::string_view::npos || last == 0) {
    throw UsageError("malformed policy id '" + std::string(name) + "'");
  }
  const auto mid = name.rfind('_', last - 1);
  if (mid == std::string_view::npos || mid == 0) {
    throw UsageError("malformed policy id '" + std::string(name) + "'");
  }
  PolicyId id;
  id.role = std::string(name.substr(0, mid));
  id.side = parse_side(name.substr(mid + 1, last - mid - 1));
  const auto digits = name.substr(last + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id.checkpoint);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw UsageError("malformed checkpoint in policy id '" + std::string(name) + "'");
  }
  return id;
}

void MixturePolicy::validate() const {
  if (components.empty()) throw UsageError("empty mixture");
  if (components.size() != weights.size() || ids.size() != components.size()) {
    throw UsageError("mixture shapes disagree");
  }
}

std::size_t MixturePolicy::draw_index(Rng& rng) const {
  validate();
  return weights.sample(rng);
}

std::vector<double> MixturePolicy::marginal(const Observation& obs) const {
  validate();
  const int n = components.front()->num_actions();
  std::vector<double> out(n, 0.0);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < components.size(); ++i) {
    components[i]->distribution(obs, d);
    const double w = weights[i].get_d();
    for (int a = 0; a < n; ++a) out[a] += w * d[a];
  }
  return out;
}

PolicyId mixture_draw(const MixturePolicy& m, Rng& rng) { return m.ids[m.draw_index(rng)]; }

}  // namespace arenaladder
