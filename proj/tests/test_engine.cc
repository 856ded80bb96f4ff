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

#include <functional>
#include <set>

#include "arenaladder/engine.h"
#include "doctest.h"

namespace arenaladder {
namespace {

const TransAction kNoop = TransAction::noop();
TransAction mot(Motion m) { return TransAction::motion(m); }
TransAction atk(Attack a) { return TransAction::attack(a); }

GameState adjacent(const EngineConfig& cfg, int left = 5) {
  GameState s = reset(cfg);
  s.fighters[0].pos = left;
  s.fighters[1].pos = left + 1;
  return s;
}

TEST_CASE("reset places fighters at mirrored quarter cells") {
  EngineConfig cfg;
  GameState s = reset(cfg);
  CHECK(s.fighters[0].hp == 100);
  CHECK(s.fighters[1].hp == 100);
  CHECK(s.timer == 200);
  CHECK(s.fighters[0].pos == 3);
  CHECK(s.fighters[1].pos == 9);
  CHECK(s == reset(cfg));
  CHECK_FALSE(check_invariants(s, cfg));
}

TEST_CASE("invalid configs name the violated bound") {
  EngineConfig cfg;
  cfg.arena_width = 3;
  CHECK_THROWS_WITH_AS(reset(cfg), doctest::Contains("arena_width"), ConfigError);
  cfg = EngineConfig{};
  cfg.horizon = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("horizon"), ConfigError);
  cfg = EngineConfig{};
  cfg.chip_fraction = Rational(3, 2);
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("chip_fraction"), ConfigError);
  cfg = EngineConfig{};
  cfg.close_range = 13;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("close_range"), ConfigError);
  cfg = EngineConfig{};
  cfg.damage_table[0].damage = -1;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("damage"), ConfigError);
}

TEST_CASE("null dynamics") {
  EngineConfig cfg;
  GameState s = reset(cfg);
  StepResult r = step(s, kNoop, kNoop, cfg);
  CHECK(r.state.fighters[0].pos == s.fighters[0].pos);
  CHECK(r.state.fighters[1].pos == s.fighters[1].pos);
  CHECK(r.state.fighters[0].hp == 100);
  CHECK(r.state.timer == 199);
  CHECK(r.sparse[0] == Rational(0));
  CHECK(r.sparse[1] == Rational(0));
  CHECK_FALSE(r.terminal);
}

TEST_CASE("light punch in range deals table damage") {
  EngineConfig cfg;
  GameState s = adjacent(cfg);
  StepResult r = step(s, atk(Attack::kLightPunch), kNoop, cfg);
  CHECK(r.state.fighters[1].hp == 100 - cfg.damage_table[0].damage);
  CHECK(r.state.fighters[1].phase == Phase::kHitstun);
  CHECK(r.state.fighters[0].phase == Phase::kRecovery);
  CHECK(r.state.fighters[0].phase_frames == 1);
  CHECK(r.dense[0] == Rational(12));
  CHECK(r.dense[1] == Rational(-4));
}

TEST_CASE("out of range attack whiffs") {
  EngineConfig cfg;
  GameState s = reset(cfg);
  StepResult r = step(s, atk(Attack::kLightPunch), kNoop, cfg);
  CHECK(r.state.fighters[1].hp == 100);
}

TEST_CASE("startup frames delay the hit") {
  EngineConfig cfg;
  GameState s = adjacent(cfg);
  s = advance(s, atk(Attack::kHardKick), kNoop, cfg);
  CHECK(s.fighters[0].phase == Phase::kStartup);
  CHECK(s.fighters[1].hp == 100);
  s = advance(s, kNoop, kNoop, cfg);
  CHECK(s.fighters[0].phase == Phase::kActive);
  CHECK(s.fighters[1].hp == 100);
  s = advance(s, kNoop, kNoop, cfg);
  CHECK(s.fighters[1].hp == 89);
  CHECK(s.fighters[0].phase == Phase::kRecovery);
  CHECK(s.fighters[0].phase_frames == 3);
}

TEST_CASE("crouch ducks punches, jump clears kicks") {
  EngineConfig cfg;
  GameState s = adjacent(cfg);
  CHECK(advance(s, atk(Attack::kLightPunch), mot(Motion::kCrouch), cfg).fighters[1].hp == 100);
  CHECK(advance(s, atk(Attack::kLightKick), mot(Motion::kJump), cfg).fighters[1].hp == 100);
  CHECK(advance(s, atk(Attack::kLightKick), mot(Motion::kCrouch), cfg).fighters[1].hp == 96);
  CHECK(advance(s, atk(Attack::kLightPunch), mot(Motion::kJump), cfg).fighters[1].hp == 96);
}

TEST_CASE("blocking takes floored chip damage and blockstun") {
  EngineConfig cfg;
  GameState s = adjacent(cfg);
  s = advance(s, atk(Attack::kHardPunch), kNoop, cfg);
  s = advance(s, kNoop, kNoop, cfg);
  s = advance(s, kNoop, mot(Motion::kDefense), cfg);
  CHECK(s.fighters[1].hp == 99);  // floor(11 / 10)
  CHECK(s.fighters[1].phase == Phase::kBlockstun);
  GameState t = adjacent(cfg);
  t = advance(t, atk(Attack::kLightPunch), mot(Motion::kDefense), cfg);
  CHECK(t.fighters[1].hp == 100);  // floor(4 / 10) = 0
}

TEST_CASE("medium punch at close range throws through a standing block") {
  EngineConfig cfg;
  GameState s = adjacent(cfg);
  s = advance(s, atk(Attack::kMediumPunch), kNoop, cfg);
  s = advance(s, kNoop, mot(Motion::kDefense), cfg);
  CHECK(s.fighters[1].hp == 93);
  CHECK(s.fighters[1].phase == Phase::kHitstun);
}

TEST_CASE("simultaneous hits trade") {
  EngineConfig cfg;
  GameState s = adjacent(cfg);
  s = advance(s, atk(Attack::kLightPunch), atk(Attack::kLightKick), cfg);
  CHECK(s.fighters[0].hp == 96);
  CHECK(s.fighters[1].hp == 96);
}

TEST_CASE("a hit during startup cancels the pending move") {
  EngineConfig cfg;
  GameState s = adjacent(cfg);
  s = advance(s, atk(Attack::kLightPunch), atk(Attack::kHardPunch), cfg);
  CHECK(s.fighters[1].pending_move == kNoMove);
  CHECK(s.fighters[1].phase == Phase::kHitstun);
  s = advance(s, kNoop, kNoop, cfg);
  s = advance(s, kNoop, kNoop, cfg);
  CHECK(s.fighters[0].hp == 100);
}

TEST_CASE("movement is clamped so fighters never pass") {
  EngineConfig cfg;
  GameState s = adjacent(cfg);
  GameState n = advance(s, mot(Motion::kFrontFlip), mot(Motion::kFrontFlip), cfg);
  CHECK(n.fighters[0].pos == 5);
  CHECK(n.fighters[1].pos == 6);
  s.fighters[1].pos = 9;  // gap of 3
  n = advance(s, mot(Motion::kFrontFlip), mot(Motion::kFrontFlip), cfg);
  CHECK(n.fighters[0].pos == 6);
  CHECK(n.fighters[1].pos == 8);
  n = advance(s, mot(Motion::kForward), mot(Motion::kFrontFlip), cfg);
  CHECK(n.fighters[0].pos == 6);
  CHECK(n.fighters[1].pos == 7);
  s.fighters[0].pos = 0;
  n = advance(s, mot(Motion::kBackFlip), kNoop, cfg);
  CHECK(n.fighters[0].pos == 0);
  n = advance(s, mot(Motion::kBackFlip), mot(Motion::kFrontFlip), cfg);
  CHECK(n.fighters[1].pos == 7);
}

TEST_CASE("timeout with more hp wins") {
  EngineConfig cfg;
  GameState s = reset(cfg);
  s.timer = 1;
  s.fighters[0].hp = 50;
  s.fighters[1].hp = 30;
  StepResult r = step(s, kNoop, kNoop, cfg);
  CHECK(r.terminal);
  CHECK(r.state.winner == Outcome::kLeftWin);
  CHECK(r.sparse[0] == Rational(1));
  CHECK(r.sparse[1] == Rational(-1));
  CHECK(r.dense[0] == Rational(50));
  CHECK(r.dense[1] == Rational(-50));
  CHECK_THROWS_AS(step(r.state, kNoop, kNoop, cfg), UsageError);
}

TEST_CASE("equal hp at timeout is a draw") {
  EngineConfig cfg;
  GameState s = reset(cfg);
  s.timer = 1;
  StepResult r = step(s, kNoop, kNoop, cfg);
  CHECK(r.state.winner == Outcome::kDraw);
  CHECK(r.sparse[0] == Rational(0));
}

TEST_CASE("dense reward formula") {
  EngineConfig cfg;
  GameState prev = reset(cfg);
  GameState next = prev;
  next.timer -= 1;
  next.fighters[1].hp -= 10;
  CHECK(dense_reward(prev, next, Side::kLeft, cfg) == Rational(30));
  CHECK(dense_reward(prev, prev, Side::kLeft, cfg) == Rational(0));
  cfg.reward_lambda = 1;
  cfg.bonus_scale = 0;
  CHECK(dense_reward(prev, next, Side::kLeft, cfg) +
            dense_reward(prev, next, Side::kRight, cfg) ==
        Rational(0));
}

TEST_CASE("illegal actions are rejected") {
  EngineConfig cfg;
  GameState s = reset(cfg);
  CHECK_THROWS_AS(step(s, TransAction::special(0), kNoop, cfg), UsageError);
  cfg.hard_coded_specials = true;
  CHECK_NOTHROW(step(s, TransAction::special(0), kNoop, cfg));
  CHECK(cfg.legal_actions().size() == 18);
}

TEST_CASE("encode_action mapping") {
  HumanAction h;
  CHECK(encode_action(h, Facing::kRight) == kNoop);
  CHECK(encode_action(HumanAction().press(HumanAction::kUp), Facing::kRight) ==
        mot(Motion::kJump));
  CHECK(encode_action(HumanAction().press(HumanAction::kDown).press(HumanAction::kRight),
                      Facing::kRight) == mot(Motion::kOffensiveCrouch));
  CHECK(encode_action(HumanAction().press(HumanAction::kDown).press(HumanAction::kRight),
                      Facing::kLeft) == mot(Motion::kDefensiveCrouch));
  CHECK(encode_action(HumanAction().press(HumanAction::kLeft).press(HumanAction::kRight),
                      Facing::kRight) == kNoop);
  CHECK(encode_action(HumanAction().press(HumanAction::kUp).press(HumanAction::kLeft),
                      Facing::kRight) == mot(Motion::kBackFlip));
  CHECK(encode_action(HumanAction().press(HumanAction::kZ).press(HumanAction::kUp),
                      Facing::kRight) == atk(Attack::kHardPunch));
  CHECK(encode_action(HumanAction().press(HumanAction::kA), Facing::kLeft) ==
        atk(Attack::kLightKick));
  CHECK(encode_action(HumanAction().press(HumanAction::kMode).press(HumanAction::kStart),
                      Facing::kLeft) == kNoop);
}

TEST_CASE("match_special longest suffix") {
  auto specials = default_specials();
  std::vector<TransAction> buf = {mot(Motion::kCrouch), mot(Motion::kForward)};
  CHECK(match_special(buf, atk(Attack::kLightPunch), specials) == 0);
  CHECK(match_special(buf, atk(Attack::kLightKick), specials) == std::nullopt);
  CHECK(match_special({}, atk(Attack::kLightPunch), specials) == std::nullopt);

  std::vector<SpecialMove> custom = {
      {"short", {InputPattern::exact(mot(Motion::kForward)), InputPattern::any_punch()},
       {1, 1, 0, 0}, SpecialEffect::kSpinKick},
      {"long",
       {InputPattern::exact(mot(Motion::kCrouch)), InputPattern::exact(mot(Motion::kForward)),
        InputPattern::any_punch()},
       {1, 1, 0, 0}, SpecialEffect::kSpinKick},
  };
  CHECK(match_special(buf, atk(Attack::kHardPunch), custom) == 1);
  std::vector<TransAction> only_fwd = {mot(Motion::kForward)};
  CHECK(match_special(only_fwd, atk(Attack::kHardPunch), custom) == 0);
  custom.push_back(custom[1]);
  CHECK(match_special(buf, atk(Attack::kHardPunch), custom) == std::nullopt);
}

TEST_CASE("sequence special fires a projectile") {
  EngineConfig cfg;
  GameState s = reset(cfg);
  s = advance(s, mot(Motion::kCrouch), kNoop, cfg);
  s = advance(s, mot(Motion::kForward), kNoop, cfg);
  CHECK(s.fighters[0].pos == 4);
  s = advance(s, atk(Attack::kLightPunch), kNoop, cfg);
  CHECK(s.fighters[0].pending_move == special_move_id(0));
  s = advance(s, kNoop, kNoop, cfg);
  REQUIRE(s.projectiles.size() == 1);
  CHECK(s.projectiles[0].pos == 5);
  int steps = 0;
  while (s.fighters[1].hp == 100 && steps < 10) {
    s = advance(s, kNoop, kNoop, cfg);
    ++steps;
  }
  CHECK(s.fighters[1].hp == 94);
  CHECK(steps == 4);
  CHECK(s.projectiles.empty());
}

TEST_CASE("opposing projectiles annihilate") {
  EngineConfig cfg;
  cfg.hard_coded_specials = true;
  GameState s = reset(cfg);
  const TransAction fire = TransAction::special(0);
  s = advance(s, fire, fire, cfg);
  s = advance(s, kNoop, kNoop, cfg);
  CHECK(s.projectiles.size() == 2);
  for (int i = 0; i < 4; ++i) s = advance(s, kNoop, kNoop, cfg);
  CHECK(s.projectiles.empty());
  CHECK(s.fighters[0].hp == 100);
  CHECK(s.fighters[1].hp == 100);
}

TEST_CASE("rising strike is invulnerable during startup") {
  EngineConfig cfg;
  cfg.hard_coded_specials = true;
  GameState s = adjacent(cfg);
  s = advance(s, TransAction::special(1), atk(Attack::kLightPunch), cfg);
  CHECK(s.fighters[0].hp == 100);
  s = advance(s, kNoop, mot(Motion::kJump), cfg);
  CHECK(s.fighters[1].hp == 90);
}

TEST_CASE("observation bucketing and symmetry") {
  EngineConfig cfg;
  GameState s = reset(cfg);
  Observation o = observe(s, Side::kLeft, cfg);
  CHECK(o.own_hp_bucket == 7);
  CHECK(hp_bucket(0, cfg) == 0);
  CHECK(observe(s, Side::kLeft, cfg) == observe(mirror(s, cfg), Side::kRight, cfg));
  CHECK(Observation::from_key(o.key()) == o);
  CHECK(Observation::parse(o.to_string()) == o);
  Grid g = observe_grid(s, Side::kLeft, cfg);
  REQUIRE(g.size() == 3);
  for (const auto& row : g) CHECK(static_cast<int>(row.size()) == cfg.arena_width);
  CHECK(g[1][3] == 'N');
  CHECK(g[1][9] == 'n');
  CHECK(g[0] == "###### ######");
  CHECK(std::holds_alternative<Grid>(observe(s, Side::kRight, ObservationMode::kGrid, cfg)));
}

EngineConfig tiny_enum_config(int width) {
  EngineConfig cfg;
  cfg.arena_width = width;
  cfg.hp_buckets = 2;
  cfg.horizon = 4;
  cfg.max_hp = 10;
  cfg.action_set = {kNoop, mot(Motion::kForward), mot(Motion::kBackFlip),
                    atk(Attack::kLightPunch), atk(Attack::kHardKick)};
  return cfg;
}

// Reachability oracle: plain depth-first expansion of every joint action
// sequence, with no state deduplication.
std::set<ObsKey> brute_force_observations(const EngineConfig& cfg) {
  std::set<ObsKey> out;
  const auto actions = cfg.legal_actions();
  std::function<void(const GameState&)> dfs = [&](const GameState& s) {
    if (s.terminal) return;
    out.insert(observe(s, Side::kLeft, cfg).key());
    out.insert(observe(s, Side::kRight, cfg).key());
    for (auto a : actions)
      for (auto b : actions) dfs(step(s, a, b, cfg).state);
  };
  dfs(reset(cfg));
  return out;
}

TEST_CASE("enumerate_observations matches brute-force reachability") {
  for (int width : {5, 7}) {
    EngineConfig cfg = tiny_enum_config(width);
    ObservationSet set = enumerate_observations(cfg);
    auto oracle = brute_force_observations(cfg);
    REQUIRE(set.count() == oracle.size());
    std::size_t i = 0;
    for (ObsKey k : oracle) CHECK(set.observations[i++].key() == k);
  }
  auto a = enumerate_observations(tiny_enum_config(5));
  auto b = enumerate_observations(tiny_enum_config(5));
  CHECK(a.observations == b.observations);
  CHECK(enumerate_observations(tiny_enum_config(7)).count() > a.count());
  CHECK_THROWS_AS(enumerate_observations(tiny_enum_config(5), ObservationMode::kGrid),
                  UnsupportedModeError);
  CHECK_THROWS_AS(enumerate_observations(EngineConfig{}, ObservationMode::kSymbolic, 1000),
                  CapacityError);
}

TEST_CASE("config ini round trip") {
  EngineConfig cfg;
  cfg.arena_width = 7;
  cfg.chip_fraction = Rational(1, 4);
  cfg.action_set = {kNoop, atk(Attack::kHardKick)};
  cfg.specials[2].data.damage = 9;
  EngineConfig back;
  std::istringstream in(cfg.to_ini());
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find(" = ");
    back.set(line.substr(0, eq), line.substr(eq + 3));
  }
  CHECK(back == cfg);
  CHECK(back.digest() == cfg.digest());
  back.seed = 99;
  CHECK(back.digest() == cfg.digest());
  back.max_hp = 50;
  CHECK(back.digest() != cfg.digest());
  CHECK_THROWS_AS(back.set("bogus", "1"), ConfigError);
  CHECK_THROWS_AS(back.set("max_hp", "x"), ConfigError);
}

TEST_CASE("random episodes keep invariants, mirror symmetry and zero-sum") {
  EngineConfig cfg;
  cfg.hard_coded_specials = true;
  cfg.reward_lambda = 1;
  cfg.bonus_scale = 0;
  const auto actions = cfg.legal_actions();
  Rng rng(5);
  for (int ep = 0; ep < 200; ++ep) {
    GameState s = reset(cfg);
    Rational sparse_sum(0);
    while (!s.terminal) {
      const TransAction a = actions[rng.below(actions.size())];
      const TransAction b = actions[rng.below(actions.size())];
      StepResult r = step(s, a, b, cfg);
      REQUIRE_FALSE(check_invariants(r.state, cfg));
      CHECK(r.state.timer == s.timer - 1);
      CHECK(r.state.fighters[0].hp <= s.fighters[0].hp);
      CHECK(r.state.fighters[1].hp <= s.fighters[1].hp);
      CHECK(r.dense[0] + r.dense[1] == Rational(0));
      GameState m = advance(mirror(s, cfg), b, a, cfg);
      REQUIRE(serialize(m) == serialize(mirror(r.state, cfg)));
      sparse_sum += r.sparse[0] + r.sparse[1];
      s = r.state;
    }
    CHECK(sparse_sum == Rational(0));
  }
}

}  // namespace
}  // namespace arenaladder
