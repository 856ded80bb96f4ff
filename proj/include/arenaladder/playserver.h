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
// Live human-vs-agent play. A Session is the server-authoritative match:
// it consumes client protocol lines and advances one engine step per tick.
// PlayServer exposes sessions over WebSocket (/ws) and serves the client
// bundle over plain HTTP.
//
// Wire protocol: one JSON object per line, keys in the order listed.
//
//   client -> server
//     {"type":"hello","client":<string>}
//     {"type":"input","buttons":[12 booleans],"seq":<int>}
//         buttons in the order B, A, MODE, START, UP, DOWN, LEFT, RIGHT,
//         C, Y, X, Z; seq strictly increasing, older inputs are ignored
//     {"type":"rematch"}
//     {"type":"quit"}
//
//   server -> client
//     {"type":"config","session":<id>,"arena_width":<int>,"max_hp":<int>,
//      "horizon":<int>,"tick_rate":<int>,"human_side":"left"|"right",
//      "agent":<policy id>,"buttons":[12 names]}
//     {"type":"snapshot","match":<int>,"tick":<int>,"grid":[3 strings],
//      "hp":[left,right],"timer":<int>,"phases":[left,right],
//      "blocking":[left,right],"projectiles":[{"pos","dir","owner"}]}
//     {"type":"result","match":<int>,"winner":"left"|"right"|"draw",
//      "final_hp":[left,right],"score":[left,right]}
//     {"type":"error","message":<string>}
//
// The grid is drawn from the left fighter's corner (uppercase = left).

#ifndef ARENALADDER_PLAYSERVER_H_
#define ARENALADDER_PLAYSERVER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arenaladder/engine.h"
#include "arenaladder/policy.h"
#include "arenaladder/store.h"

namespace arenaladder {

inline constexpr int kDefaultTickRate = 8;

struct SessionOptions {
  EngineConfig config;
  PolicyId agent_id;
  PolicyPtr agent;
  Side human_side = Side::kLeft;
  int tick_rate = kDefaultTickRate;  // 1..30
  std::uint64_t seed = 0;
};

class Session {
 public:
  // Throws UsageError for a tick rate outside [1, 30] or a missing agent.
  Session(std::string id, SessionOptions opts);

  const std::string& id() const { return id_; }
  const SessionOptions& options() const { return opts_; }

  // Handles one client line and returns the replies. Malformed lines
  // produce an error message and leave the session untouched.
  std::vector<std::string> handle(std::string_view line);
  // One engine step if a match is live: returns the snapshot and, at the
  // end of a match, the result.
  std::vector<std::string> tick();

  bool started() const { return started_; }
  bool live() const { return started_ && !state_.terminal && !closed_; }
  bool closed() const { return closed_; }
  const GameState& state() const { return state_; }
  int match_index() const { return match_; }
  int ticks() const { return tick_; }
  std::array<int, 2> score() const { return score_; }
  // Actions applied in the current match, left then right.
  const std::vector<std::pair<TransAction, TransAction>>& trace() const { return trace_; }
  // Results of finished matches, tagged "human".
  const std::vector<MatchRecord>& results() const { return results_; }

  std::string config_message() const;
  std::string snapshot_message() const;

 private:
  std::string error(std::string_view message) const;
  void start_match();
  TransAction legal_or_noop(TransAction a) const;

  std::string id_;
  SessionOptions opts_;
  std::vector<TransAction> actions_;
  bool started_ = false;
  bool closed_ = false;
  int match_ = 0;
  int tick_ = 0;
  GameState state_;
  Rng rng_;
  std::optional<HumanAction> pending_;
  std::int64_t last_seq_ = -1;
  std::array<int, 2> score_{};
  std::vector<std::pair<TransAction, TransAction>> trace_;
  std::vector<MatchRecord> results_;
};

struct PlayServerOptions {
  SessionOptions session;  // template for every connection
  std::filesystem::path static_dir;  // client bundle; empty serves a stub page
  std::filesystem::path match_log;   // appended with human results if set
  std::filesystem::path replay_dir;  // one replay per finished match if set
  std::string address = "127.0.0.1";
  unsigned short port = 0;  // 0 picks a free port
};

// HTTP + WebSocket front end on one io thread.
class PlayServer {
 public:
  explicit PlayServer(PlayServerOptions opts);
  ~PlayServer();
  PlayServer(const PlayServer&) = delete;
  PlayServer& operator=(const PlayServer&) = delete;

  // Binds and starts serving on a background thread; returns the port.
  unsigned short start();
  void stop();
  unsigned short port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Content type for a static file by extension.
std::string_view mime_type(const std::filesystem::path& p);

}  // namespace arenaladder

#endif  // ARENALADDER_PLAYSERVER_H_
