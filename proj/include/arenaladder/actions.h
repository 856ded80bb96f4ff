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

// Action spaces: the categorical transformed action set, the 12-button
// human action, the human-to-transformed encoder and special-move input
// sequences.

#ifndef ARENALADDER_ACTIONS_H_
#define ARENALADDER_ACTIONS_H_

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arenaladder {

enum class Motion : std::uint8_t {
  kDefense,
  kForward,
  kJump,
  kCrouch,
  kBackFlip,
  kFrontFlip,
  kOffensiveCrouch,
  kDefensiveCrouch,
};
inline constexpr int kNumMotions = 8;

enum class Attack : std::uint8_t {
  kLightPunch,
  kMediumPunch,
  kHardPunch,
  kLightKick,
  kMediumKick,
  kHardKick,
};
inline constexpr int kNumAttacks = 6;

constexpr bool is_punch(Attack a) { return static_cast<int>(a) < 3; }
constexpr bool is_kick(Attack a) { return static_cast<int>(a) >= 3; }

enum class Facing : std::uint8_t { kLeft, kRight };

// One categorical action: Noop, a motion, a normal attack or a hard-coded
// special. The dense code orders them noop, motions, attacks, specials.
class TransAction {
 public:
  enum class Kind : std::uint8_t { kNoop, kMotion, kAttack, kSpecial };

  constexpr TransAction() = default;

  static constexpr TransAction noop() { return TransAction(); }
  static constexpr TransAction motion(Motion m) {
    return TransAction(Kind::kMotion, static_cast<std::uint8_t>(m));
  }
  static constexpr TransAction attack(Attack a) {
    return TransAction(Kind::kAttack, static_cast<std::uint8_t>(a));
  }
  static constexpr TransAction special(int id) {
    return TransAction(Kind::kSpecial, static_cast<std::uint8_t>(id));
  }
  static TransAction from_code(int code);

  constexpr Kind kind() const { return kind_; }
  constexpr Motion as_motion() const { return static_cast<Motion>(index_); }
  constexpr Attack as_attack() const { return static_cast<Attack>(index_); }
  constexpr int special_id() const { return index_; }

  constexpr int code() const {
    switch (kind_) {
      case Kind::kNoop:
        return 0;
      case Kind::kMotion:
        return 1 + index_;
      case Kind::kAttack:
        return 1 + kNumMotions + index_;
      case Kind::kSpecial:
        return 1 + kNumMotions + kNumAttacks + index_;
    }
    return 0;
  }

  friend constexpr bool operator==(TransAction a, TransAction b) {
    return a.code() == b.code();
  }
  friend constexpr auto operator<=>(TransAction a, TransAction b) {
    return a.code() <=> b.code();
  }

 private:
  constexpr TransAction(Kind kind, std::uint8_t index)
      : kind_(kind), index_(index) {}

  Kind kind_ = Kind::kNoop;
  std::uint8_t index_ = 0;
};

inline constexpr int kNumBasicActions = 1 + kNumMotions + kNumAttacks;

// Canonical names: noop, defense, forward, jump, crouch, back_flip,
// front_flip, offensive_crouch, defensive_crouch, light_punch, ...,
// hard_kick, special_<id>.
std::string to_string(TransAction a);
std::optional<TransAction> parse_action(std::string_view name);
std::string_view to_string(Motion m);
std::string_view to_string(Attack a);

// The 12 binary buttons of the arcade controller, in the fixed order
// B, A, MODE, START, UP, DOWN, LEFT, RIGHT, C, Y, X, Z.
struct HumanAction {
  enum Button : int {
    kB = 0,
    kA,
    kMode,
    kStart,
    kUp,
    kDown,
    kLeft,
    kRight,
    kC,
    kY,
    kX,
    kZ,
  };
  static constexpr int kNumButtons = 12;
  static constexpr std::array<std::string_view, kNumButtons> kNames = {
      "B", "A", "MODE", "START", "UP", "DOWN", "LEFT", "RIGHT", "C", "Y", "X", "Z"};

  std::array<bool, kNumButtons> buttons{};

  bool pressed(Button b) const { return buttons[b]; }
  HumanAction& press(Button b) {
    buttons[b] = true;
    return *this;
  }
  friend bool operator==(const HumanAction&, const HumanAction&) = default;
};

// Maps a controller state to a transformed action. Attack buttons win over
// directions (first pressed in B, A, C, Y, X, Z order); opposite
// directions cancel; MODE and START are ignored.
TransAction encode_action(const HumanAction& h, Facing facing);

// One element of a special-move input sequence.
struct InputPattern {
  enum class Kind : std::uint8_t { kExact, kAnyPunch, kAnyKick };
  Kind kind = Kind::kExact;
  TransAction action;

  bool matches(TransAction a) const;
  std::string to_string() const;
  static InputPattern exact(TransAction a) { return {Kind::kExact, a}; }
  static InputPattern any_punch() { return {Kind::kAnyPunch, {}}; }
  static InputPattern any_kick() { return {Kind::kAnyKick, {}}; }
  static InputPattern parse(std::string_view text);
};

struct MoveData {
  int damage = 0;
  int range = 0;
  int startup = 0;
  int recovery = 0;
  friend bool operator==(const MoveData&, const MoveData&) = default;
};

enum class SpecialEffect : std::uint8_t {
  kProjectile,    // spawns a projectile that travels one cell per step
  kRisingStrike,  // invulnerable during startup, cannot be ducked or jumped
  kSpinKick,      // long-range kick
};

struct SpecialMove {
  std::string name;
  std::vector<InputPattern> sequence;
  MoveData data;
  SpecialEffect effect = SpecialEffect::kProjectile;
  friend bool operator==(const SpecialMove& a, const SpecialMove& b) {
    return a.name == b.name && a.data == b.data && a.effect == b.effect &&
           a.sequence.size() == b.sequence.size() &&
           std::equal(a.sequence.begin(), a.sequence.end(), b.sequence.begin(),
                      [](const InputPattern& x, const InputPattern& y) {
                        return x.kind == y.kind && x.action == y.action;
                      });
  }
};

// Projectile, rising strike and spin kick.
std::vector<SpecialMove> default_specials();

std::string_view to_string(SpecialEffect e);
SpecialEffect parse_special_effect(std::string_view text);

// Returns the id of the unique longest special whose input sequence is a
// suffix of buffer ++ [next]. Ties at the longest length are ambiguous and
// return nothing.
std::optional<int> match_special(std::span<const TransAction> buffer,
                                 TransAction next,
                                 std::span<const SpecialMove> specials);

}  // namespace arenaladder

#endif  // ARENALADDER_ACTIONS_H_
