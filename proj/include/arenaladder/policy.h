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

// Policies over the legal action list of an EngineConfig. Actions are
// referred to by their index in config.legal_actions().

#ifndef ARENALADDER_POLICY_H_
#define ARENALADDER_POLICY_H_

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "arenaladder/engine.h"
#include "arenaladder/rational.h"

namespace arenaladder {

class Policy {
 public:
  virtual ~Policy() = default;

  virtual int num_actions() const = 0;
  // Writes the action distribution at `obs` into out[0..num_actions).
  virtual void distribution(const Observation& obs, std::span<double> out) const = 0;
  // Exact variant. The default converts the double distribution exactly.
  virtual void distribution_exact(const Observation& obs, std::vector<Exact>& out) const;

  // Samples an action index.
  int act(const Observation& obs, Rng& rng) const;
};

using PolicyPtr = std::shared_ptr<const Policy>;

// Samples an index from a probability vector by inverse CDF.
int sample_index(std::span<const double> probs, Rng& rng);

template <class Scalar>
void policy_distribution(const Policy& p, const Observation& obs, std::vector<Scalar>& out);

template <>
inline void policy_distribution<double>(const Policy& p, const Observation& obs,
                                        std::vector<double>& out) {
  out.resize(p.num_actions());
  p.distribution(obs, out);
}

template <>
inline void policy_distribution<Exact>(const Policy& p, const Observation& obs,
                                       std::vector<Exact>& out) {
  p.distribution_exact(obs, out);
}

class TabularPolicy : public Policy {
 public:
  // Uniform default over n actions.
  explicit TabularPolicy(int num_actions = 1);
  TabularPolicy(int num_actions, std::vector<double> default_dist);

  int num_actions() const override { return num_actions_; }
  void distribution(const Observation& obs, std::span<double> out) const override;

  // Throws UsageError unless dist is nonnegative, of the right arity and
  // sums to 1 within 1e-9.
  void set(ObsKey key, std::vector<double> dist);
  void set_action(ObsKey key, int action);
  const std::vector<double>& get(ObsKey key) const;
  bool contains(ObsKey key) const { return table_.contains(key); }
  std::size_t size() const { return table_.size(); }
  const std::vector<double>& default_dist() const { return default_; }
  const std::unordered_map<ObsKey, std::vector<double>>& table() const { return table_; }
  // Keys in increasing order.
  std::vector<ObsKey> sorted_keys() const;

  static TabularPolicy point_mass(int num_actions, int action);

 private:
  int num_actions_;
  std::vector<double> default_;
  std::unordered_map<ObsKey, std::vector<double>> table_;
};

// Built-in CPU opponent with eight difficulty levels.
class ScriptedCPU : public Policy {
 public:
  struct Params {
    Exact reaction_prob;
    Exact aggression;
    Exact special_prob;
    Exact block_prob;
  };

  // Throws UsageError for a level outside 1..8.
  ScriptedCPU(int level, const EngineConfig& config);

  int level() const { return level_; }
  const Params& params() const { return params_; }
  static Params params_for(int level);

  int num_actions() const override { return static_cast<int>(actions_.size()); }
  void distribution(const Observation& obs, std::span<double> out) const override;
  void distribution_exact(const Observation& obs, std::vector<Exact>& out) const override;

 private:
  template <class Scalar>
  void compute(const Observation& obs, std::vector<Scalar>& out, const Scalar& react,
               const Scalar& aggr, const Scalar& special, const Scalar& block) const;

  int level_;
  Params params_;
  std::array<double, 4> params_d_;
  EngineConfig config_;
  std::vector<TransAction> actions_;
};

ScriptedCPU cpu_policy(int level, const EngineConfig& config);

// Probability vector over a population. Stored exactly.
class MetaStrategy {
 public:
  MetaStrategy() = default;
  // Throws UsageError if a weight is negative or the sum is not 1 within
  // 1e-12; the result is renormalized exactly.
  explicit MetaStrategy(std::vector<Exact> weights);
  static MetaStrategy from_doubles(const std::vector<double>& weights);
  static MetaStrategy uniform(std::size_t n);
  static MetaStrategy point(std::size_t n, std::size_t i);

  std::size_t size() const { return weights_.size(); }
  const std::vector<Exact>& weights() const { return weights_; }
  const Exact& operator[](std::size_t i) const { return weights_[i]; }
  std::vector<double> to_doubles() const;
  std::size_t sample(Rng& rng) const;
  std::string to_string() const;

 private:
  std::vector<Exact> weights_;
  std::vector<double> cumulative_;
};

struct PolicyId {
  std::string role;
  Side side = Side::kLeft;
  std::int64_t checkpoint = 0;

  // Role_Side_Checkpoint, e.g. "MA_left_3".
  std::string name() const;
  static PolicyId parse(std::string_view name);
  friend bool operator==(const PolicyId&, const PolicyId&) = default;
};

// Opponent drawn once per episode from a meta-strategy and held fixed.
struct MixturePolicy {
  std::vector<PolicyId> ids;
  std::vector<PolicyPtr> components;
  MetaStrategy weights;

  // Throws UsageError if empty or shapes disagree.
  void validate() const;
  std::size_t draw_index(Rng& rng) const;
  // Weight-averaged action distribution at one observation.
  std::vector<double> marginal(const Observation& obs) const;
};

PolicyId mixture_draw(const MixturePolicy& m, Rng& rng);

}  // namespace arenaladder

#endif  // ARENALADDER_POLICY_H_
