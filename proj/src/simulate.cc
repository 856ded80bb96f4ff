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

#include "arenaladder/simulate.h"

namespace arenaladder {

MatchResult play_match(const EngineConfig& config, const Policy& left, const Policy& right,
                       std::uint64_t seed, bool record_trace) {
  const auto actions = config.legal_actions();
  Rng rng_l(derive_seed(seed, 1));
  Rng rng_r(derive_seed(seed, 2));
  MatchResult r;
  r.seed = seed;
  r.dense = {Rational(0), Rational(0)};
  GameState s = reset(config);
  while (!s.terminal) {
    const TransAction a = actions[left.act(observe(s, Side::kLeft, config), rng_l)];
    const TransAction b = actions[right.act(observe(s, Side::kRight, config), rng_r)];
    GameState n = advance(s, a, b, config);
    r.dense[0] += dense_reward(s, n, Side::kLeft, config);
    r.dense[1] += dense_reward(s, n, Side::kRight, config);
    if (record_trace) r.trace.emplace_back(a, b);
    s = std::move(n);
    ++r.length;
  }
  r.outcome = *s.winner;
  r.final_hp = {s.fighters[0].hp, s.fighters[1].hp};
  return r;
}

double score(const MatchResult& r, Side side) { return half_points(r.outcome, side) / 2.0; }

}  // namespace arenaladder
