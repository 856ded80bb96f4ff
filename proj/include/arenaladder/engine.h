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

// MiniBrawl: a deterministic, discrete, finite-horizon two-player fighting
// simulator. One call to step() is one decision tick for both fighters.
//
// Per-step resolution order:
//   1. sequence specials are decoded from each fighter's input buffer;
//   2. motions move fighters with collision clamping (no passing through);
//   3. attacks whose startup has elapsed resolve against the defender's
//      posture this step (crouching ducks punches, airborne clears kicks);
//   4. blocking turns a hit into floor(damage * chip_fraction) plus
//      blockstun;
//   5. simultaneous connecting attacks trade;
//   6. a medium punch within close_range ignores a standing block (throw);
//   7. projectiles advance one cell per step.
//
// Everything is integer or exact rational; there is no floating point.

#ifndef ARENALADDER_ENGINE_H_
#define ARENALADDER_ENGINE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "arenaladder/actions.h"
#include "arenaladder/common.h"
#include "arenaladder/rational.h"

namespace arenaladder {

struct EngineConfig {
  int arena_width = 13;
  int max_hp = 100;
  int horizon = 200;
  // Indexed by Attack. Punch and kick of the same strength share data.
  std::array<MoveData, kNumAttacks> damage_table = {{{4, 1, 0, 1},
                                                     {7, 1, 1, 2},
                                                     {11, 2, 2, 3},
                                                     {4, 1, 0, 1},
                                                     {7, 1, 1, 2},
                                                     {11, 2, 2, 3}}};
  Rational chip_fraction{1, 10};
  bool special_moves_enabled = true;
  bool hard_coded_specials = false;
  int close_range = 1;
  Rational reward_alpha{1};
  Rational reward_lambda{3};
  Rational bonus_scale{100};
  std::uint64_t seed = 0;

  std::vector<SpecialMove> specials = default_specials();
  int hitstun_frames = 2;
  int blockstun_frames = 1;
  // Observation resolution. hp_buckets = max_hp + 1 and
  // timer_buckets = horizon + 1 make the symbolic view exact.
  int hp_buckets = 8;
  int timer_buckets = 8;
  // Restricts the legal action set; empty means every legal action.
  std::vector<TransAction> action_set;

  // Throws ConfigError naming the violated bound.
  void validate() const;
  // Legal actions in canonical code order.
  std::vector<TransAction> legal_actions() const;
  bool is_legal(TransAction a) const;
  const MoveData& move(int move_id) const;
  // Canonical "key = value" rendering of every field, one per line.
  std::string to_ini() const;
  // Assigns one field from its to_ini() spelling. Throws ConfigError on an
  // unknown key or malformed value.
  void set(std::string_view key, std::string_view value);
  // Digest of the rules that affect dynamics and observations (not seed).
  std::string digest() const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

enum class Phase : std::uint8_t {
  kNeutral,
  kStartup,
  kActive,
  kRecovery,
  kHitstun,
  kBlockstun,
  kAirborne,
  kCrouching,
};
std::string_view to_string(Phase p);

inline constexpr int kInputBufferCapacity = 4;
inline constexpr int kNoMove = -1;

// Move ids: 0..5 normal attacks (Attack order), 6 + k special k.
constexpr int special_move_id(int special) { return kNumAttacks + special; }
constexpr bool is_special_move(int move_id) { return move_id >= kNumAttacks; }

struct FighterState {
  int pos = 0;
  int hp = 0;
  Phase phase = Phase::kNeutral;
  int phase_frames = 0;
  int pending_move = kNoMove;
  Facing facing = Facing::kRight;
  // Guarding during the step that produced this state.
  bool blocking = false;
  std::array<TransAction, kInputBufferCapacity> buffer{};
  int buffer_size = 0;

  std::span<const TransAction> input_buffer() const {
    return {buffer.data(), static_cast<std::size_t>(buffer_size)};
  }
  void push_input(TransAction a);
  bool actionable() const {
    return phase == Phase::kNeutral || phase == Phase::kCrouching;
  }
  friend bool operator==(const FighterState&, const FighterState&) = default;
};

struct Projectile {
  int pos = 0;
  int dir = 1;
  Side owner = Side::kLeft;
  int damage = 0;
  friend bool operator==(const Projectile&, const Projectile&) = default;
};

struct GameState {
  std::array<FighterState, 2> fighters;
  int timer = 0;
  std::vector<Projectile> projectiles;
  bool terminal = false;
  std::optional<Outcome> winner;
  std::uint64_t rng_state = 0;

  const FighterState& fighter(Side s) const { return fighters[index(s)]; }
  FighterState& fighter(Side s) { return fighters[index(s)]; }
  friend bool operator==(const GameState&, const GameState&) = default;
};

struct StepResult {
  GameState state;
  std::array<Rational, 2> sparse;
  std::array<Rational, 2> dense;
  bool terminal = false;
};

GameState reset(const EngineConfig& config);

// Simultaneous transition. Throws UsageError on a terminal state or an
// action outside the legal set.
StepResult step(const GameState& state, TransAction a_left, TransAction a_right,
                const EngineConfig& config);

// Transition without reward bookkeeping (used by search).
GameState advance(const GameState& state, TransAction a_left,
                  TransAction a_right, const EngineConfig& config);

// r = alpha * [lambda * (opp hp lost) - (own hp lost) + bonus], with the
// terminal bonus bonus_scale * hp_own / max_hp on a win and
// -bonus_scale * hp_opp / max_hp on a loss.
Rational dense_reward(const GameState& prev, const GameState& next, Side side,
                      const EngineConfig& config);
std::array<Rational, 2> sparse_rewards(const GameState& next);

GameState mirror(const GameState& state, const EngineConfig& config);

// Canonical text serialization; equal strings iff equal states.
std::string serialize(const GameState& state);
std::uint64_t state_digest(const GameState& state);
// Compact binary key for hashing in search.
std::string state_key(const GameState& state);

// Returns a description of the first violated state invariant.
std::optional<std::string> check_invariants(const GameState& state,
                                            const EngineConfig& config);

// ---------------------------------------------------------------------------
// Observations

enum class ObservationMode { kSymbolic, kGrid };

using ObsKey = std::uint64_t;

// Side-relative symbolic view. Positions are measured from the viewer's
// own corner, so the view is invariant under mirroring.
struct Observation {
  static constexpr int kNoProjectile = 99;

  int own_pos = 0;
  int opp_pos = 0;
  int own_hp_bucket = 0;
  int opp_hp_bucket = 0;
  int own_phase = 0;  // phase_code()
  int opp_phase = 0;
  int timer_bucket = 0;
  // Offset of the nearest projectile toward the opponent, or kNoProjectile.
  int projectile_offset = kNoProjectile;

  ObsKey key() const;
  static Observation from_key(ObsKey key);
  // Dot-separated canonical key used in checkpoint files.
  std::string to_string() const;
  static std::optional<Observation> parse(std::string_view text);

  friend bool operator==(const Observation&, const Observation&) = default;
  friend auto operator<=>(const Observation&, const Observation&) = default;
};

// Packs phase, remaining frames and pending move into 11 bits.
int phase_code(Phase phase, int frames, int pending_move);
Phase phase_of_code(int code);
int frames_of_code(int code);
int pending_of_code(int code);

int hp_bucket(int hp, const EngineConfig& config);
int timer_bucket(int timer, const EngineConfig& config);

Observation observe(const GameState& state, Side side, const EngineConfig& config);

// arena_width x 3 cells: HP-bar row, fighter row, projectile row. Own
// fighter uppercase, opponent lowercase, drawn from the viewer's corner.
using Grid = std::vector<std::string>;
Grid observe_grid(const GameState& state, Side side, const EngineConfig& config);

std::variant<Observation, Grid> observe(const GameState& state, Side side,
                                        ObservationMode mode,
                                        const EngineConfig& config);

struct ObservationSet {
  std::vector<Observation> observations;  // sorted by key
  std::size_t count() const { return observations.size(); }
};

// All symbolic observations seen by either side at a non-terminal state
// reachable from reset under the legal action set (breadth-first search
// over states). Grid mode throws UnsupportedModeError; more than state_cap
// distinct states throws CapacityError.
ObservationSet enumerate_observations(const EngineConfig& config,
                                      ObservationMode mode = ObservationMode::kSymbolic,
                                      std::size_t state_cap = 5'000'000);

// True when the symbolic observation determines the dynamics-relevant
// state, which exact best responses rely on.
bool observation_is_exact(const EngineConfig& config);

}  // namespace arenaladder

#endif  // ARENALADDER_ENGINE_H_
