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

// Named engine configurations used by the CLI, the tests and the
// acceptance suite.
//
//   tiny     width 5, four steps, six actions, lossless observations;
//            small enough for exact best responses against mixtures.
//            Longer horizons let the attacker win from every state, which
//            saturates exploitability at 1 for every policy.
//   small    width 7, twenty steps, every normal action; used for the
//            CPU-ladder curriculum.
//   default  the engine defaults.

#ifndef ARENALADDER_PRESETS_H_
#define ARENALADDER_PRESETS_H_

#include <string>
#include <string_view>

#include "arenaladder/engine.h"

namespace arenaladder {

inline EngineConfig tiny_config() {
  EngineConfig c;
  c.arena_width = 5;
  c.max_hp = 4;
  c.horizon = 4;
  c.damage_table = {{{2, 1, 0, 1}, {3, 1, 1, 1}, {4, 2, 1, 2},
                     {2, 1, 0, 1}, {3, 1, 1, 1}, {4, 2, 1, 2}}};
  c.chip_fraction = Rational(1, 2);
  c.special_moves_enabled = false;
  c.hard_coded_specials = false;
  c.bonus_scale = Rational(4);
  c.hitstun_frames = 1;
  c.blockstun_frames = 1;
  c.hp_buckets = c.max_hp + 1;
  c.timer_buckets = c.horizon + 1;
  c.action_set = {TransAction::motion(Motion::kDefense),
                  TransAction::motion(Motion::kForward),
                  TransAction::motion(Motion::kJump),
                  TransAction::motion(Motion::kCrouch),
                  TransAction::attack(Attack::kLightPunch),
                  TransAction::attack(Attack::kMediumPunch)};
  return c;
}

inline EngineConfig small_config() {
  EngineConfig c;
  c.arena_width = 7;
  c.max_hp = 20;
  c.horizon = 20;
  c.damage_table = {{{2, 1, 0, 1}, {3, 1, 1, 2}, {5, 2, 2, 3},
                     {2, 1, 0, 1}, {3, 1, 1, 2}, {5, 2, 2, 3}}};
  c.special_moves_enabled = false;
  c.hard_coded_specials = false;
  c.bonus_scale = Rational(20);
  c.hp_buckets = 5;
  c.timer_buckets = 4;
  return c;
}

// Throws UsageError for an unknown name.
inline EngineConfig preset(std::string_view name) {
  if (name == "tiny") return tiny_config();
  if (name == "small") return small_config();
  if (name == "default") return EngineConfig{};
  throw UsageError("unknown preset '" + std::string(name) + "' (valid: tiny, small, default)");
}

}  // namespace arenaladder

#endif  // ARENALADDER_PRESETS_H_
