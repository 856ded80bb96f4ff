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

#include "arenaladder/actions.h"

#include <algorithm>
#include <charconv>

#include "arenaladder/common.h"

namespace arenaladder {
namespace {

constexpr std::array<std::string_view, kNumMotions> kMotionNames = {
    "defense",   "forward",    "jump",             "crouch",
    "back_flip", "front_flip", "offensive_crouch", "defensive_crouch"};

constexpr std::array<std::string_view, kNumAttacks> kAttackNames = {
    "light_punch", "medium_punch", "hard_punch",
    "light_kick",  "medium_kick",  "hard_kick"};

constexpr std::string_view kSpecialPrefix = "special_";

}  // namespace

TransAction TransAction::from_code(int code) {
  if (code <= 0) return noop();
  if (code <= kNumMotions) return motion(static_cast<Motion>(code - 1));
  if (code <= kNumMotions + kNumAttacks) {
    return attack(static_cast<Attack>(code - 1 - kNumMotions));
  }
  return special(code - kNumBasicActions);
}

std::string_view to_string(Motion m) {
  return kMotionNames[static_cast<int>(m)];
}

std::string_view to_string(Attack a) {
  return kAttackNames[static_cast<int>(a)];
}

std::string to_string(TransAction a) {
  switch (a.kind()) {
    case TransAction::Kind::kNoop:
      return "noop";
    case TransAction::Kind::kMotion:
      return std::string(to_string(a.as_motion()));
    case TransAction::Kind::kAttack:
      return std::string(to_string(a.as_attack()));
    case TransAction::Kind::kSpecial:
      return std::string(kSpecialPrefix) + std::to_string(a.special_id());
  }
  return "noop";
}

std::optional<TransAction> parse_action(std::string_view name) {
  if (name == "noop") return TransAction::noop();
  for (int i = 0; i < kNumMotions; ++i) {
    if (name == kMotionNames[i]) return TransAction::motion(static_cast<Motion>(i));
  }
  for (int i = 0; i < kNumAttacks; ++i) {
    if (name == kAttackNames[i]) return TransAction::attack(static_cast<Attack>(i));
  }
  if (name.starts_with(kSpecialPrefix)) {
    std::string_view digits = name.substr(kSpecialPrefix.size());
    int id = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && id >= 0 &&
        id < 200) {
      return TransAction::special(id);
    }
  }
  return std::nullopt;
}

TransAction encode_action(const HumanAction& h, Facing facing) {
  using B = HumanAction::Button;
  static constexpr std::array<std::pair<B, Attack>, 6> kAttackButtons = {{
      {B::kB, Attack::kMediumKick},
      {B::kA, Attack::kLightKick},
      {B::kC, Attack::kHardKick},
      {B::kY, Attack::kMediumPunch},
      {B::kX, Attack::kLightPunch},
      {B::kZ, Attack::kHardPunch},
  }};
  for (const auto& [button, attack] : kAttackButtons) {
    if (h.pressed(button)) return TransAction::attack(attack);
  }

  const bool up = h.pressed(B::kUp) && !h.pressed(B::kDown);
  const bool down = h.pressed(B::kDown) && !h.pressed(B::kUp);
  const bool left = h.pressed(B::kLeft) && !h.pressed(B::kRight);
  const bool right = h.pressed(B::kRight) && !h.pressed(B::kLeft);
  const bool toward = facing == Facing::kRight ? right : left;
  const bool away = facing == Facing::kRight ? left : right;

  if (up) {
    if (toward) return TransAction::motion(Motion::kFrontFlip);
    if (away) return TransAction::motion(Motion::kBackFlip);
    return TransAction::motion(Motion::kJump);
  }
  if (down) {
    if (toward) return TransAction::motion(Motion::kOffensiveCrouch);
    if (away) return TransAction::motion(Motion::kDefensiveCrouch);
    return TransAction::motion(Motion::kCrouch);
  }
  if (toward) return TransAction::motion(Motion::kForward);
  if (away) return TransAction::motion(Motion::kDefense);
  return TransAction::noop();
}

bool InputPattern::matches(TransAction a) const {
  switch (kind) {
    case Kind::kExact:
      return a == action;
    case Kind::kAnyPunch:
      return a.kind() == TransAction::Kind::kAttack && is_punch(a.as_attack());
    case Kind::kAnyKick:
      return a.kind() == TransAction::Kind::kAttack && is_kick(a.as_attack());
  }
  return false;
}

std::string InputPattern::to_string() const {
  switch (kind) {
    case Kind::kExact:
      return arenaladder::to_string(action);
    case Kind::kAnyPunch:
      return "*punch";
    case Kind::kAnyKick:
      return "*kick";
  }
  return "";
}

InputPattern InputPattern::parse(std::string_view text) {
  if (text == "*punch") return any_punch();
  if (text == "*kick") return any_kick();
  auto a = parse_action(text);
  if (!a) throw ConfigError("unknown action '" + std::string(text) + "' in special sequence");
  return exact(*a);
}

std::vector<SpecialMove> default_specials() {
  const auto m = [](Motion x) { return InputPattern::exact(TransAction::motion(x)); };
  return {
      {"projectile",
       {m(Motion::kCrouch), m(Motion::kForward), InputPattern::any_punch()},
       {6, 0, 1, 3},
       SpecialEffect::kProjectile},
      {"rising_strike",
       {m(Motion::kForward), m(Motion::kCrouch), InputPattern::any_punch()},
       {10, 1, 1, 4},
       SpecialEffect::kRisingStrike},
      {"spin_kick",
       {m(Motion::kCrouch), m(Motion::kBackFlip), InputPattern::any_kick()},
       {8, 3, 2, 3},
       SpecialEffect::kSpinKick},
  };
}

std::string_view to_string(SpecialEffect e) {
  switch (e) {
    case SpecialEffect::kProjectile:
      return "projectile";
    case SpecialEffect::kRisingStrike:
      return "rising_strike";
    case SpecialEffect::kSpinKick:
      return "spin_kick";
  }
  return "projectile";
}

SpecialEffect parse_special_effect(std::string_view text) {
  if (text == "projectile") return SpecialEffect::kProjectile;
  if (text == "rising_strike") return SpecialEffect::kRisingStrike;
  if (text == "spin_kick") return SpecialEffect::kSpinKick;
  throw ConfigError("unknown special effect '" + std::string(text) + "'");
}

std::optional<int> match_special(std::span<const TransAction> buffer,
                                 TransAction next,
                                 std::span<const SpecialMove> specials) {
  std::optional<int> best;
  std::size_t best_len = 0;
  bool ambiguous = false;
  for (std::size_t id = 0; id < specials.size(); ++id) {
    const auto& seq = specials[id].sequence;
    if (seq.empty() || seq.size() > buffer.size() + 1) continue;
    if (!seq.back().matches(next)) continue;
    bool ok = true;
    for (std::size_t k = 1; k < seq.size() && ok; ++k) {
      ok = seq[seq.size() - 1 - k].matches(buffer[buffer.size() - k]);
    }
    if (!ok) continue;
    if (seq.size() > best_len) {
      best = static_cast<int>(id);
      best_len = seq.size();
      ambiguous = false;
    } else if (seq.size() == best_len) {
      ambiguous = true;
    }
  }
  if (ambiguous) return std::nullopt;
  return best;
}

}  // namespace arenaladder
