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

#include "arenaladder/engine.h"

#include <algorithm>
#include <charconv>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

namespace arenaladder {
namespace {

constexpr int kMaxWidth = 32;
constexpr int kMaxFrames = 15;
constexpr int kMaxSpecials = 9;

[[noreturn]] void bound(const std::string& what) {
  throw ConfigError("invalid engine config: " + what);
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected boolean for '" + std::string(key) + "', got '" +
                    std::string(v) + "'");
}

template <class Int>
Int parse_num(std::string_view key, std::string_view v) {
  Int x{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("expected integer for '" + std::string(key) + "', got '" +
                      std::string(v) + "'");
  }
  return x;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string move_data_str(const MoveData& m) {
  return std::to_string(m.damage) + "," + std::to_string(m.range) + "," +
         std::to_string(m.startup) + "," + std::to_string(m.recovery);
}

MoveData parse_move_data(std::string_view key, std::string_view v) {
  auto parts = split(v, ',');
  if (parts.size() != 4) {
    throw ConfigError("expected damage,range,startup,recovery for '" +
                      std::string(key) + "'");
  }
  return {parse_num<int>(key, trim(parts[0])), parse_num<int>(key, trim(parts[1])),
          parse_num<int>(key, trim(parts[2])), parse_num<int>(key, trim(parts[3]))};
}

// Per-step intent of one fighter after decoding its input.
struct Intent {
  int advance = 0;  // cells toward the opponent, negative = retreat
  bool airborne = false;
  bool crouch = false;
  bool block = false;
  int start_move = kNoMove;    // move begun this step
  int resolve_move = kNoMove;  // move whose attack lands this step
  bool invulnerable = false;
};

bool is_punch_move(int move) {
  return move >= 0 && move < kNumAttacks && is_punch(static_cast<Attack>(move));
}

bool is_kick_move(int move) {
  return move >= 0 && move < kNumAttacks && is_kick(static_cast<Attack>(move));
}

int decode_move(FighterState& f, TransAction a, const EngineConfig& cfg) {
  int move = kNoMove;
  if (a.kind() == TransAction::Kind::kSpecial) {
    move = special_move_id(a.special_id());
  } else if (cfg.special_moves_enabled) {
    if (auto id = match_special(f.input_buffer(), a, cfg.specials)) {
      move = special_move_id(*id);
    }
  }
  if (move == kNoMove && a.kind() == TransAction::Kind::kAttack) {
    move = static_cast<int>(a.as_attack());
  }
  return move;
}

void apply_motion(Motion m, Intent& in, FighterState& f) {
  switch (m) {
    case Motion::kDefense:
      in.block = true;
      break;
    case Motion::kForward:
      in.advance = 1;
      break;
    case Motion::kJump:
      in.airborne = true;
      f.phase = Phase::kAirborne;
      f.phase_frames = 1;
      break;
    case Motion::kCrouch:
      in.crouch = true;
      f.phase = Phase::kCrouching;
      break;
    case Motion::kBackFlip:
      in.advance = -2;
      in.airborne = true;
      break;
    case Motion::kFrontFlip:
      in.advance = 2;
      in.airborne = true;
      break;
    case Motion::kOffensiveCrouch:
      in.advance = 1;
      in.crouch = true;
      f.phase = Phase::kCrouching;
      break;
    case Motion::kDefensiveCrouch:
      in.crouch = true;
      in.block = true;
      f.phase = Phase::kCrouching;
      break;
  }
}

// Moves the fighter into the phase that follows starting `move`.
void begin_move(int move, Intent& in, FighterState& f, const EngineConfig& cfg) {
  const MoveData& d = cfg.move(move);
  in.start_move = move;
  if (d.startup == 0) {
    in.resolve_move = move;
    return;
  }
  f.pending_move = move;
  if (d.startup == 1) {
    f.phase = Phase::kActive;
    f.phase_frames = 0;
  } else {
    f.phase = Phase::kStartup;
    f.phase_frames = d.startup - 1;
  }
  if (is_special_move(move) &&
      cfg.specials[move - kNumAttacks].effect == SpecialEffect::kRisingStrike) {
    in.invulnerable = true;
  }
}

Intent prepare(FighterState& f, TransAction a, const EngineConfig& cfg) {
  Intent in;
  f.blocking = false;
  if (f.actionable()) {
    const int move = decode_move(f, a, cfg);
    if (cfg.special_moves_enabled) f.push_input(a);
    f.phase = Phase::kNeutral;
    f.phase_frames = 0;
    if (move != kNoMove) {
      begin_move(move, in, f, cfg);
    } else if (a.kind() == TransAction::Kind::kMotion) {
      apply_motion(a.as_motion(), in, f);
    }
    f.blocking = in.block;
    return in;
  }
  if (cfg.special_moves_enabled) f.push_input(a);
  switch (f.phase) {
    case Phase::kStartup:
      if (is_special_move(f.pending_move) &&
          cfg.specials[f.pending_move - kNumAttacks].effect ==
              SpecialEffect::kRisingStrike) {
        in.invulnerable = true;
      }
      if (--f.phase_frames == 0) f.phase = Phase::kActive;
      break;
    case Phase::kActive:
      in.resolve_move = f.pending_move;
      f.pending_move = kNoMove;
      break;
    case Phase::kAirborne:
      in.airborne = true;
      [[fallthrough]];
    default:
      if (--f.phase_frames <= 0) {
        f.phase = Phase::kNeutral;
        f.phase_frames = 0;
      }
      break;
  }
  return in;
}

// Clamps simultaneous advances so fighters neither overlap nor cross.
void resolve_motion(std::array<FighterState, 2>& fs, std::array<Intent, 2>& in,
                    int width) {
  FighterState& l = fs[0];
  FighterState& r = fs[1];
  int al = in[0].advance;
  int ar = in[1].advance;
  if (al < 0) al = std::max(al, -l.pos);
  if (ar < 0) ar = std::max(ar, -(width - 1 - r.pos));
  const int gap = r.pos - l.pos - 1;
  if (al + ar > gap) {
    const int half = gap / 2;
    if (al <= half) {
      ar = gap - al;
    } else if (ar <= half) {
      al = gap - ar;
    } else {
      al = ar = half;
    }
  }
  l.pos += al;
  r.pos -= ar;
}

struct HitResult {
  int damage = 0;
  bool hitstun = false;
  bool blockstun = false;
};

void land(HitResult& h, int damage, bool blocked, const EngineConfig& cfg) {
  if (blocked) {
    const Rational chip = cfg.chip_fraction * Rational(damage);
    h.damage += static_cast<int>(chip.numerator() / chip.denominator());
    h.blockstun = true;
  } else {
    h.damage += damage;
    h.hitstun = true;
  }
}

void canonical_order(std::vector<Projectile>& ps) {
  std::sort(ps.begin(), ps.end(), [](const Projectile& a, const Projectile& b) {
    return std::tie(a.pos, a.dir, a.owner, a.damage) <
           std::tie(b.pos, b.dir, b.owner, b.damage);
  });
}

}  // namespace

// ---------------------------------------------------------------------------
// EngineConfig

void EngineConfig::validate() const {
  if (arena_width < 5) bound("arena_width must be >= 5 (got " + std::to_string(arena_width) + ")");
  if (arena_width > kMaxWidth) {
    bound("arena_width must be <= 32 (got " + std::to_string(arena_width) + ")");
  }
  if (max_hp < 1) bound("max_hp must be >= 1");
  if (horizon < 1) bound("horizon must be >= 1 (got " + std::to_string(horizon) + ")");
  for (int i = 0; i < kNumAttacks; ++i) {
    const auto& m = damage_table[i];
    const std::string name(to_string(static_cast<Attack>(i)));
    if (m.damage < 0) bound("damage of " + name + " must be >= 0");
    if (m.range < 0) bound("range of " + name + " must be >= 0");
    if (m.startup < 0 || m.startup > kMaxFrames + 1) bound("startup of " + name + " must be in [0, 16]");
    if (m.recovery < 0 || m.recovery > kMaxFrames) bound("recovery of " + name + " must be in [0, 15]");
  }
  if (chip_fraction < Rational(0) || chip_fraction > Rational(1)) {
    bound("chip_fraction must be in [0, 1]");
  }
  if (close_range < 0 || close_range >= arena_width) {
    bound("close_range must be in [0, arena_width)");
  }
  if (static_cast<int>(specials.size()) > kMaxSpecials) bound("at most 9 specials");
  for (const auto& s : specials) {
    if (s.sequence.empty()) bound("special '" + s.name + "' has an empty sequence");
    if (s.sequence.size() > kInputBufferCapacity + 1) {
      bound("special '" + s.name + "' sequence longer than 5");
    }
    if (s.data.damage < 0 || s.data.range < 0) bound("special '" + s.name + "' data must be >= 0");
    if (s.data.startup < 0 || s.data.startup > kMaxFrames + 1 || s.data.recovery < 0 ||
        s.data.recovery > kMaxFrames) {
      bound("special '" + s.name + "' frames out of range");
    }
  }
  if (hitstun_frames < 0 || hitstun_frames > kMaxFrames) bound("hitstun_frames must be in [0, 15]");
  if (blockstun_frames < 0 || blockstun_frames > kMaxFrames) {
    bound("blockstun_frames must be in [0, 15]");
  }
  if (hp_buckets < 1 || hp_buckets > 256) bound("hp_buckets must be in [1, 256]");
  if (timer_buckets < 1 || timer_buckets > 1024) bound("timer_buckets must be in [1, 1024]");
  for (TransAction a : action_set) {
    if (a.kind() == TransAction::Kind::kSpecial &&
        (!hard_coded_specials || a.special_id() >= static_cast<int>(specials.size()))) {
      bound("action_set contains unavailable " + arenaladder::to_string(a));
    }
  }
}

std::vector<TransAction> EngineConfig::legal_actions() const {
  std::vector<TransAction> all;
  for (int c = 0; c < kNumBasicActions; ++c) all.push_back(TransAction::from_code(c));
  if (hard_coded_specials) {
    for (int i = 0; i < static_cast<int>(specials.size()); ++i) {
      all.push_back(TransAction::special(i));
    }
  }
  if (action_set.empty()) return all;
  std::vector<TransAction> out;
  for (TransAction a : all) {
    if (std::find(action_set.begin(), action_set.end(), a) != action_set.end()) {
      out.push_back(a);
    }
  }
  return out;
}

bool EngineConfig::is_legal(TransAction a) const {
  if (a.kind() == TransAction::Kind::kSpecial &&
      (!hard_coded_specials || a.special_id() >= static_cast<int>(specials.size()))) {
    return false;
  }
  return action_set.empty() ||
         std::find(action_set.begin(), action_set.end(), a) != action_set.end();
}

const MoveData& EngineConfig::move(int move_id) const {
  if (is_special_move(move_id)) return specials[move_id - kNumAttacks].data;
  return damage_table[move_id];
}

std::string EngineConfig::to_ini() const {
  std::ostringstream out;
  out << "arena_width = " << arena_width << "\n";
  out << "max_hp = " << max_hp << "\n";
  out << "horizon = " << horizon << "\n";
  for (int i = 0; i < kNumAttacks; ++i) {
    out << "damage_table." << to_string(static_cast<Attack>(i)) << " = "
        << move_data_str(damage_table[i]) << "\n";
  }
  out << "chip_fraction = " << arenaladder::to_string(chip_fraction) << "\n";
  out << "special_moves_enabled = " << bool_str(special_moves_enabled) << "\n";
  out << "hard_coded_specials = " << bool_str(hard_coded_specials) << "\n";
  out << "close_range = " << close_range << "\n";
  out << "reward_alpha = " << arenaladder::to_string(reward_alpha) << "\n";
  out << "reward_lambda = " << arenaladder::to_string(reward_lambda) << "\n";
  out << "bonus_scale = " << arenaladder::to_string(bonus_scale) << "\n";
  out << "seed = " << seed << "\n";
  out << "hitstun_frames = " << hitstun_frames << "\n";
  out << "blockstun_frames = " << blockstun_frames << "\n";
  out << "hp_buckets = " << hp_buckets << "\n";
  out << "timer_buckets = " << timer_buckets << "\n";
  out << "action_set = ";
  for (std::size_t i = 0; i < action_set.size(); ++i) {
    out << (i ? "," : "") << arenaladder::to_string(action_set[i]);
  }
  out << "\n";
  out << "specials = " << specials.size() << "\n";
  for (std::size_t i = 0; i < specials.size(); ++i) {
    const auto& s = specials[i];
    out << "special." << i << " = " << s.name << ";" << to_string(s.effect) << ";";
    for (std::size_t k = 0; k < s.sequence.size(); ++k) {
      out << (k ? "," : "") << s.sequence[k].to_string();
    }
    out << ";" << move_data_str(s.data) << "\n";
  }
  return out.str();
}

void EngineConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "arena_width") {
    arena_width = parse_num<int>(key, value);
  } else if (key == "max_hp") {
    max_hp = parse_num<int>(key, value);
  } else if (key == "horizon") {
    horizon = parse_num<int>(key, value);
  } else if (key.starts_with("damage_table.")) {
    const auto name = key.substr(13);
    auto a = parse_action(name);
    if (!a || a->kind() != TransAction::Kind::kAttack) {
      throw ConfigError("unknown attack in '" + std::string(key) + "'");
    }
    damage_table[static_cast<int>(a->as_attack())] = parse_move_data(key, value);
  } else if (key == "chip_fraction") {
    chip_fraction = parse_rational(value);
  } else if (key == "special_moves_enabled") {
    special_moves_enabled = parse_bool(key, value);
  } else if (key == "hard_coded_specials") {
    hard_coded_specials = parse_bool(key, value);
  } else if (key == "close_range") {
    close_range = parse_num<int>(key, value);
  } else if (key == "reward_alpha") {
    reward_alpha = parse_rational(value);
  } else if (key == "reward_lambda") {
    reward_lambda = parse_rational(value);
  } else if (key == "bonus_scale") {
    bonus_scale = parse_rational(value);
  } else if (key == "seed") {
    seed = parse_num<std::uint64_t>(key, value);
  } else if (key == "hitstun_frames") {
    hitstun_frames = parse_num<int>(key, value);
  } else if (key == "blockstun_frames") {
    blockstun_frames = parse_num<int>(key, value);
  } else if (key == "hp_buckets") {
    hp_buckets = parse_num<int>(key, value);
  } else if (key == "timer_buckets") {
    timer_buckets = parse_num<int>(key, value);
  } else if (key == "action_set") {
    action_set.clear();
    for (auto name : split(value, ',')) {
      name = trim(name);
      if (name.empty()) continue;
      auto a = parse_action(name);
      if (!a) throw ConfigError("unknown action '" + std::string(name) + "' in action_set");
      action_set.push_back(*a);
    }
  } else if (key == "specials") {
    const int n = parse_num<int>(key, value);
    if (n < 0 || n > kMaxSpecials) throw ConfigError("specials must be in [0, 9]");
    specials.resize(n);
  } else if (key.starts_with("special.")) {
    const int i = parse_num<int>(key, key.substr(8));
    if (i < 0 || i >= kMaxSpecials) throw ConfigError("special index out of range in '" + std::string(key) + "'");
    auto fields = split(value, ';');
    if (fields.size() != 4) {
      throw ConfigError("expected name;effect;sequence;data for '" + std::string(key) + "'");
    }
    SpecialMove s;
    s.name = std::string(trim(fields[0]));
    s.effect = parse_special_effect(trim(fields[1]));
    for (auto p : split(trim(fields[2]), ',')) s.sequence.push_back(InputPattern::parse(trim(p)));
    s.data = parse_move_data(key, trim(fields[3]));
    if (static_cast<int>(specials.size()) <= i) specials.resize(i + 1);
    specials[i] = std::move(s);
  } else {
    throw ConfigError("unknown engine key '" + std::string(key) + "'");
  }
}

std::string EngineConfig::digest() const {
  EngineConfig c = *this;
  c.seed = 0;
  return sha256_hex(c.to_ini()).substr(0, 16);
}

// ---------------------------------------------------------------------------
// State

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kNeutral:
      return "neutral";
    case Phase::kStartup:
      return "startup";
    case Phase::kActive:
      return "active";
    case Phase::kRecovery:
      return "recovery";
    case Phase::kHitstun:
      return "hitstun";
    case Phase::kBlockstun:
      return "blockstun";
    case Phase::kAirborne:
      return "airborne";
    case Phase::kCrouching:
      return "crouching";
  }
  return "neutral";
}

void FighterState::push_input(TransAction a) {
  if (buffer_size == kInputBufferCapacity) {
    std::move(buffer.begin() + 1, buffer.end(), buffer.begin());
    buffer[kInputBufferCapacity - 1] = a;
  } else {
    buffer[buffer_size++] = a;
  }
}

GameState reset(const EngineConfig& config) {
  config.validate();
  GameState s;
  const int w = config.arena_width;
  s.fighters[0].pos = w / 4;
  s.fighters[0].facing = Facing::kRight;
  s.fighters[1].pos = w - 1 - w / 4;
  s.fighters[1].facing = Facing::kLeft;
  for (auto& f : s.fighters) f.hp = config.max_hp;
  s.timer = config.horizon;
  s.rng_state = config.seed;
  return s;
}

GameState advance(const GameState& state, TransAction a_left, TransAction a_right,
                  const EngineConfig& cfg) {
  GameState s = state;
  std::array<Intent, 2> in = {prepare(s.fighters[0], a_left, cfg),
                              prepare(s.fighters[1], a_right, cfg)};
  resolve_motion(s.fighters, in, cfg.arena_width);

  // Melee and projectile spawns, computed against the pre-hit postures so
  // that simultaneous hits trade.
  std::array<HitResult, 2> hits;
  std::vector<Projectile> spawned;
  const int dist = s.fighters[1].pos - s.fighters[0].pos;
  for (int side = 0; side < 2; ++side) {
    const int move = in[side].resolve_move;
    if (move == kNoMove) continue;
    const MoveData& d = cfg.move(move);
    const Intent& def = in[1 - side];
    const int dir = side == 0 ? 1 : -1;
    if (is_special_move(move)) {
      const SpecialEffect effect = cfg.specials[move - kNumAttacks].effect;
      if (effect == SpecialEffect::kProjectile) {
        spawned.push_back({s.fighters[side].pos + dir, dir,
                           side == 0 ? Side::kLeft : Side::kRight, d.damage});
        continue;
      }
      if (dist > d.range || def.invulnerable) continue;
      if (effect == SpecialEffect::kSpinKick && def.airborne) continue;
      land(hits[1 - side], d.damage, def.block, cfg);
      continue;
    }
    if (dist > d.range || def.invulnerable) continue;
    if (is_punch_move(move) && def.crouch) continue;
    if (is_kick_move(move) && def.airborne) continue;
    const bool thrown = move == static_cast<int>(Attack::kMediumPunch) &&
                        dist <= cfg.close_range;
    land(hits[1 - side], d.damage, def.block && !thrown, cfg);
  }

  // Projectiles: spawn, advance, annihilate, hit.
  std::vector<Projectile> moved;
  std::vector<int> from;
  for (const auto& p : s.projectiles) {
    moved.push_back(p);
    moved.back().pos += p.dir;
    from.push_back(p.pos);
  }
  for (const auto& p : spawned) {
    moved.push_back(p);
    from.push_back(p.pos - p.dir);
  }
  std::vector<bool> dead(moved.size(), false);
  while (true) {
    int best_l = -1;
    int best_r = -1;
    for (std::size_t i = 0; i < moved.size(); ++i) {
      if (dead[i]) continue;
      if (moved[i].dir > 0) {
        if (best_l < 0 || from[i] > from[best_l]) best_l = static_cast<int>(i);
      } else {
        if (best_r < 0 || from[i] < from[best_r]) best_r = static_cast<int>(i);
      }
    }
    if (best_l < 0 || best_r < 0) break;
    if (moved[best_l].pos < moved[best_r].pos) break;
    dead[best_l] = dead[best_r] = true;
  }
  for (std::size_t i = 0; i < moved.size(); ++i) {
    if (dead[i]) continue;
    const auto& p = moved[i];
    const int target = p.owner == Side::kLeft ? 1 : 0;
    const int x = s.fighters[target].pos;
    if ((p.pos - x) * p.dir >= 0 && (from[i] - x) * p.dir < 0) {
      const Intent& def = in[target];
      if (!def.airborne && !def.invulnerable) {
        land(hits[target], p.damage, def.block, cfg);
        dead[i] = true;
      }
    }
    if (p.pos < 0 || p.pos >= cfg.arena_width) dead[i] = true;
  }
  s.projectiles.clear();
  for (std::size_t i = 0; i < moved.size(); ++i) {
    if (!dead[i]) s.projectiles.push_back(moved[i]);
  }
  canonical_order(s.projectiles);

  for (int side = 0; side < 2; ++side) {
    FighterState& f = s.fighters[side];
    const int move = in[side].resolve_move;
    if (move != kNoMove) {
      const int rec = cfg.move(move).recovery;
      f.pending_move = kNoMove;
      f.phase = rec > 0 ? Phase::kRecovery : Phase::kNeutral;
      f.phase_frames = rec;
    }
    const HitResult& h = hits[side];
    f.hp = std::max(0, f.hp - h.damage);
    if (h.hitstun) {
      f.pending_move = kNoMove;
      f.phase = cfg.hitstun_frames > 0 ? Phase::kHitstun : Phase::kNeutral;
      f.phase_frames = cfg.hitstun_frames;
    } else if (h.blockstun) {
      f.pending_move = kNoMove;
      f.phase = cfg.blockstun_frames > 0 ? Phase::kBlockstun : Phase::kNeutral;
      f.phase_frames = cfg.blockstun_frames;
    }
  }

  s.timer -= 1;
  const int hl = s.fighters[0].hp;
  const int hr = s.fighters[1].hp;
  if (s.timer == 0 || hl == 0 || hr == 0) {
    s.terminal = true;
    s.winner = hl > hr ? Outcome::kLeftWin : hr > hl ? Outcome::kRightWin : Outcome::kDraw;
  }
  return s;
}

std::array<Rational, 2> sparse_rewards(const GameState& next) {
  if (!next.terminal || !next.winner) return {Rational(0), Rational(0)};
  switch (*next.winner) {
    case Outcome::kLeftWin:
      return {Rational(1), Rational(-1)};
    case Outcome::kRightWin:
      return {Rational(-1), Rational(1)};
    case Outcome::kDraw:
      break;
  }
  return {Rational(0), Rational(0)};
}

Rational dense_reward(const GameState& prev, const GameState& next, Side side,
                      const EngineConfig& cfg) {
  const FighterState& own0 = prev.fighter(side);
  const FighterState& opp0 = prev.fighter(other(side));
  const FighterState& own1 = next.fighter(side);
  const FighterState& opp1 = next.fighter(other(side));
  Rational bonus(0);
  if (next.terminal && next.winner && *next.winner != Outcome::kDraw) {
    const bool won = (*next.winner == Outcome::kLeftWin) == (side == Side::kLeft);
    bonus = won ? cfg.bonus_scale * Rational(own1.hp, cfg.max_hp)
                : -cfg.bonus_scale * Rational(opp1.hp, cfg.max_hp);
  }
  return cfg.reward_alpha * (cfg.reward_lambda * Rational(opp0.hp - opp1.hp) -
                             Rational(own0.hp - own1.hp) + bonus);
}

StepResult step(const GameState& state, TransAction a_left, TransAction a_right,
                const EngineConfig& config) {
  if (state.terminal) throw UsageError("step called on a terminal state");
  if (!config.is_legal(a_left)) {
    throw UsageError("illegal left action " + to_string(a_left));
  }
  if (!config.is_legal(a_right)) {
    throw UsageError("illegal right action " + to_string(a_right));
  }
  StepResult r;
  r.state = advance(state, a_left, a_right, config);
  r.sparse = sparse_rewards(r.state);
  r.dense = {dense_reward(state, r.state, Side::kLeft, config),
             dense_reward(state, r.state, Side::kRight, config)};
  r.terminal = r.state.terminal;
  return r;
}

GameState mirror(const GameState& state, const EngineConfig& config) {
  const int w = config.arena_width;
  GameState m = state;
  m.fighters[0] = state.fighters[1];
  m.fighters[1] = state.fighters[0];
  for (auto& f : m.fighters) {
    f.pos = w - 1 - f.pos;
    f.facing = f.facing == Facing::kLeft ? Facing::kRight : Facing::kLeft;
  }
  for (auto& p : m.projectiles) {
    p.pos = w - 1 - p.pos;
    p.dir = -p.dir;
    p.owner = other(p.owner);
  }
  canonical_order(m.projectiles);
  if (state.winner) {
    if (*state.winner == Outcome::kLeftWin) m.winner = Outcome::kRightWin;
    if (*state.winner == Outcome::kRightWin) m.winner = Outcome::kLeftWin;
  }
  return m;
}

std::string serialize(const GameState& s) {
  std::ostringstream out;
  out << "t=" << s.timer << " term=" << s.terminal << " win="
      << (s.winner ? std::string(to_string(*s.winner)) : std::string("-"))
      << " rng=" << s.rng_state;
  for (int i = 0; i < 2; ++i) {
    const auto& f = s.fighters[i];
    out << " | f" << i << " pos=" << f.pos << " hp=" << f.hp << " ph=" << to_string(f.phase)
        << " fr=" << f.phase_frames << " mv=" << f.pending_move
        << " face=" << (f.facing == Facing::kLeft ? 'L' : 'R') << " blk=" << f.blocking
        << " buf=";
    for (int k = 0; k < f.buffer_size; ++k) out << (k ? "," : "") << f.buffer[k].code();
  }
  out << " | proj=";
  for (std::size_t i = 0; i < s.projectiles.size(); ++i) {
    const auto& p = s.projectiles[i];
    out << (i ? ";" : "") << p.pos << ":" << p.dir << ":" << index(p.owner) << ":" << p.damage;
  }
  return out.str();
}

std::uint64_t state_digest(const GameState& state) { return fnv1a64(serialize(state)); }

std::string state_key(const GameState& s) {
  std::string key;
  key.reserve(24 + 4 * s.projectiles.size());
  const auto put = [&key](int v) { key.push_back(static_cast<char>(v & 0xff)); };
  put(s.timer);
  put(s.timer >> 8);
  put(s.terminal);
  for (const auto& f : s.fighters) {
    put(f.pos);
    put(f.hp);
    put(f.hp >> 8);
    put(static_cast<int>(f.phase));
    put(f.phase_frames);
    put(f.pending_move);
    put(f.buffer_size);
    for (int k = 0; k < f.buffer_size; ++k) put(f.buffer[k].code());
  }
  for (const auto& p : s.projectiles) {
    put(p.pos);
    put(p.dir);
    put(index(p.owner));
    put(p.damage);
  }
  return key;
}

std::optional<std::string> check_invariants(const GameState& s, const EngineConfig& cfg) {
  if (s.timer < 0 || s.timer > cfg.horizon) return "timer out of [0, horizon]";
  const bool should_end = s.timer == 0 || s.fighters[0].hp == 0 || s.fighters[1].hp == 0;
  if (s.terminal != should_end) return "terminal flag disagrees with timer/hp";
  if (s.terminal != s.winner.has_value()) return "winner set iff terminal";
  if (s.fighters[0].pos >= s.fighters[1].pos) return "fighters overlap or crossed";
  for (const auto& f : s.fighters) {
    if (f.pos < 0 || f.pos >= cfg.arena_width) return "fighter outside arena";
    if (f.hp < 0 || f.hp > cfg.max_hp) return "hp out of [0, max_hp]";
    if (f.phase_frames < 0) return "negative phase_frames";
    if (f.phase == Phase::kNeutral && f.phase_frames != 0) return "neutral with frames";
    if (f.buffer_size < 0 || f.buffer_size > kInputBufferCapacity) return "buffer overflow";
  }
  for (const auto& p : s.projectiles) {
    if (p.pos < 0 || p.pos >= cfg.arena_width) return "projectile outside arena";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Observations

int phase_code(Phase phase, int frames, int pending_move) {
  return static_cast<int>(phase) | (frames << 3) | ((pending_move + 1) << 7);
}
Phase phase_of_code(int code) { return static_cast<Phase>(code & 7); }
int frames_of_code(int code) { return (code >> 3) & 15; }
int pending_of_code(int code) { return ((code >> 7) & 15) - 1; }

int hp_bucket(int hp, const EngineConfig& cfg) {
  return static_cast<int>(static_cast<std::int64_t>(hp) * cfg.hp_buckets / (cfg.max_hp + 1));
}

int timer_bucket(int timer, const EngineConfig& cfg) {
  return static_cast<int>(static_cast<std::int64_t>(timer) * cfg.timer_buckets /
                          (cfg.horizon + 1));
}

namespace {

constexpr int kBits[8] = {5, 5, 8, 8, 11, 11, 10, 6};

}  // namespace

ObsKey Observation::key() const {
  const int proj = projectile_offset == kNoProjectile ? 0 : projectile_offset + 32;
  const int fields[8] = {own_pos,   opp_pos,   own_hp_bucket, opp_hp_bucket,
                         own_phase, opp_phase, timer_bucket,  proj};
  ObsKey k = 0;
  for (int i = 0; i < 8; ++i) k = (k << kBits[i]) | static_cast<ObsKey>(fields[i]);
  return k;
}

Observation Observation::from_key(ObsKey k) {
  int fields[8];
  for (int i = 7; i >= 0; --i) {
    fields[i] = static_cast<int>(k & ((ObsKey{1} << kBits[i]) - 1));
    k >>= kBits[i];
  }
  Observation o;
  o.own_pos = fields[0];
  o.opp_pos = fields[1];
  o.own_hp_bucket = fields[2];
  o.opp_hp_bucket = fields[3];
  o.own_phase = fields[4];
  o.opp_phase = fields[5];
  o.timer_bucket = fields[6];
  o.projectile_offset = fields[7] == 0 ? kNoProjectile : fields[7] - 32;
  return o;
}

std::string Observation::to_string() const {
  std::string s = std::to_string(own_pos) + "." + std::to_string(opp_pos) + "." +
                  std::to_string(own_hp_bucket) + "." + std::to_string(opp_hp_bucket) +
                  "." + std::to_string(own_phase) + "." + std::to_string(opp_phase) + "." +
                  std::to_string(timer_bucket) + ".";
  s += projectile_offset == kNoProjectile ? std::string("n") : std::to_string(projectile_offset);
  return s;
}

std::optional<Observation> Observation::parse(std::string_view text) {
  auto parts = split(text, '.');
  if (parts.size() != 8) return std::nullopt;
  int v[8];
  for (int i = 0; i < 8; ++i) {
    if (i == 7 && parts[i] == "n") {
      v[i] = kNoProjectile;
      continue;
    }
    auto [ptr, ec] = std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), v[i]);
    if (ec != std::errc() || ptr != parts[i].data() + parts[i].size()) return std::nullopt;
  }
  Observation o{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
  if (o.from_key(o.key()) != o) return std::nullopt;
  return o;
}

Observation observe(const GameState& s, Side side, const EngineConfig& cfg) {
  const int w = cfg.arena_width;
  const auto frame = [&](int pos) { return side == Side::kLeft ? pos : w - 1 - pos; };
  const FighterState& own = s.fighter(side);
  const FighterState& opp = s.fighter(other(side));
  Observation o;
  o.own_pos = frame(own.pos);
  o.opp_pos = frame(opp.pos);
  o.own_hp_bucket = hp_bucket(own.hp, cfg);
  o.opp_hp_bucket = hp_bucket(opp.hp, cfg);
  o.own_phase = phase_code(own.phase, own.phase_frames, own.pending_move);
  o.opp_phase = phase_code(opp.phase, opp.phase_frames, opp.pending_move);
  o.timer_bucket = timer_bucket(s.timer, cfg);
  int best = Observation::kNoProjectile;
  for (const auto& p : s.projectiles) {
    if (p.owner == side) continue;
    const int off = frame(p.pos) - o.own_pos;
    if (best == Observation::kNoProjectile || std::abs(off) < std::abs(best) ||
        (std::abs(off) == std::abs(best) && off < best)) {
      best = off;
    }
  }
  o.projectile_offset = best;
  return o;
}

namespace {

char phase_glyph(const FighterState& f) {
  if (f.blocking) return 'D';
  switch (f.phase) {
    case Phase::kNeutral:
      return 'N';
    case Phase::kStartup:
      return 'S';
    case Phase::kActive:
      return 'A';
    case Phase::kRecovery:
      return 'R';
    case Phase::kHitstun:
      return 'H';
    case Phase::kBlockstun:
      return 'B';
    case Phase::kAirborne:
      return 'J';
    case Phase::kCrouching:
      return 'C';
  }
  return 'N';
}

}  // namespace

Grid observe_grid(const GameState& s, Side side, const EngineConfig& cfg) {
  const int w = cfg.arena_width;
  const auto frame = [&](int pos) { return side == Side::kLeft ? pos : w - 1 - pos; };
  const FighterState& own = s.fighter(side);
  const FighterState& opp = s.fighter(other(side));
  Grid g(3, std::string(w, '_'));

  const int half = w / 2;
  const auto filled = [&](int hp) {
    return static_cast<int>((static_cast<std::int64_t>(hp) * half + cfg.max_hp - 1) / cfg.max_hp);
  };
  std::fill(g[0].begin(), g[0].end(), ' ');
  const int own_fill = filled(own.hp);
  const int opp_fill = filled(opp.hp);
  for (int i = 0; i < half; ++i) {
    g[0][i] = i < own_fill ? '#' : '.';
    g[0][w - 1 - i] = i < opp_fill ? '#' : '.';
  }

  g[1][frame(own.pos)] = phase_glyph(own);
  g[1][frame(opp.pos)] = static_cast<char>(phase_glyph(opp) - 'A' + 'a');

  for (const auto& p : s.projectiles) {
    const int dir = side == Side::kLeft ? p.dir : -p.dir;
    g[2][frame(p.pos)] = dir > 0 ? '>' : '<';
  }
  return g;
}

std::variant<Observation, Grid> observe(const GameState& state, Side side,
                                        ObservationMode mode, const EngineConfig& config) {
  if (mode == ObservationMode::kGrid) return observe_grid(state, side, config);
  return observe(state, side, config);
}

ObservationSet enumerate_observations(const EngineConfig& config, ObservationMode mode,
                                      std::size_t state_cap) {
  if (mode != ObservationMode::kSymbolic) {
    throw UnsupportedModeError("enumerate_observations supports symbolic mode only");
  }
  const auto actions = config.legal_actions();
  std::unordered_set<std::string> seen;
  std::set<ObsKey> keys;
  std::deque<GameState> frontier;
  GameState s0 = reset(config);
  seen.insert(state_key(s0));
  frontier.push_back(std::move(s0));
  while (!frontier.empty()) {
    GameState s = std::move(frontier.front());
    frontier.pop_front();
    if (s.terminal) continue;
    keys.insert(observe(s, Side::kLeft, config).key());
    keys.insert(observe(s, Side::kRight, config).key());
    for (TransAction a : actions) {
      for (TransAction b : actions) {
        GameState n = advance(s, a, b, config);
        if (seen.insert(state_key(n)).second) {
          if (seen.size() > state_cap) {
            throw CapacityError("reachable state count exceeds cap", seen.size());
          }
          frontier.push_back(std::move(n));
        }
      }
    }
  }
  ObservationSet out;
  out.observations.reserve(keys.size());
  for (ObsKey k : keys) out.observations.push_back(Observation::from_key(k));
  return out;
}

bool observation_is_exact(const EngineConfig& config) {
  if (config.hp_buckets < config.max_hp + 1) return false;
  if (config.timer_buckets < config.horizon + 1) return false;
  if (config.special_moves_enabled) return false;
  for (TransAction a : config.legal_actions()) {
    if (a.kind() == TransAction::Kind::kSpecial &&
        config.specials[a.special_id()].effect == SpecialEffect::kProjectile) {
      return false;
    }
  }
  return true;
}

}  // namespace arenaladder
