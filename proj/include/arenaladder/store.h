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
// Run artifacts on disk. Every format is text, starts with a format and
// version line, and (except the append-only match log) ends with a
// SHA-256 digest of the preceding bytes.
//
//   runs/<id>/manifest       RunManifest
//   runs/<id>/policies/      one checkpoint per policy
//   runs/<id>/payoff.csv     row,col,win_rate,matches
//   runs/<id>/payoff.cache   entries keyed by (row, col, config digest)
//   runs/<id>/matches.log    JSON lines
//   runs/<id>/replays/       JSON replays

#ifndef ARENALADDER_STORE_H_
#define ARENALADDER_STORE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arenaladder/engine.h"
#include "arenaladder/learner.h"
#include "arenaladder/metagame.h"
#include "arenaladder/policy.h"
#include "arenaladder/simulate.h"

namespace arenaladder {

namespace fs = std::filesystem;

// The recorded digest does not match the content.
class DigestError : public Error {
 public:
  using Error::Error;
};

// Unknown format version, or an artifact written for a different engine
// config.
class VersionError : public Error {
 public:
  using Error::Error;
};

// A record that cannot be parsed; line numbers start at 1.
class MalformedError : public Error {
 public:
  MalformedError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const fs::path& path, const std::string& content);
std::string read_file(const fs::path& path);

// ---------------------------------------------------------------------------
// Policy checkpoints

struct Checkpoint {
  PolicyId id;
  TabularPolicy policy;
};

// Probabilities are written with 12 significant digits and renormalized on
// load.
void save_policy(const fs::path& path, const PolicyId& id, const TabularPolicy& policy,
                 const EngineConfig& config);
// Throws VersionError if the file was written for another engine config.
Checkpoint load_policy(const fs::path& path, const EngineConfig& config);

// Q tables with visit counts, for resuming training.
void save_qtable(const fs::path& path, const QTable& q, const VisitTable& visits,
                 const EngineConfig& config);
std::pair<QTable, VisitTable> load_qtable(const fs::path& path, const EngineConfig& config);

// ---------------------------------------------------------------------------
// Match log

struct MatchRecord {
  std::int64_t match_id = 0;
  PolicyId left;
  PolicyId right;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::kDraw;
  std::array<int, 2> final_hp{};
  int length = 0;
  std::array<Rational, 2> dense{};
  std::string tag;  // e.g. "human" for play-server matches

  static MatchRecord from(std::int64_t id, const PolicyId& left, const PolicyId& right,
                          const MatchResult& r, std::string tag = {});
  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

// Appends one record and flushes; writes the header to a new log.
void append_match(const fs::path& log, const MatchRecord& rec);
// Every complete record in order; a missing log is empty. A trailing line
// without its newline is treated as an interrupted append and skipped.
std::vector<MatchRecord> read_matches(const fs::path& log);

// ---------------------------------------------------------------------------
// Payoffs

void write_payoff_csv(const fs::path& path, const PayoffMatrix& m);

class PayoffCache {
 public:
  std::optional<PayoffEntry> lookup(const std::string& config_digest, const PolicyId& row,
                                    const PolicyId& col) const;
  void put(const std::string& config_digest, const PolicyId& row, const PolicyId& col,
           const PayoffEntry& e);
  // Copies every known entry of the matrix.
  void put_all(const std::string& config_digest, const PayoffMatrix& m);
  // Fills unknown entries of the matrix from the cache; returns how many.
  std::size_t fill(const std::string& config_digest, PayoffMatrix& m) const;
  // Drops entries for any other config; returns how many were dropped.
  std::size_t invalidate_except(const std::string& config_digest);
  std::size_t size() const { return entries_.size(); }

  void save(const fs::path& path) const;
  // A missing file yields an empty cache.
  static PayoffCache load(const fs::path& path);

  friend bool operator==(const PayoffCache&, const PayoffCache&) = default;

 private:
  std::map<std::string, PayoffEntry> entries_;  // "digest,row,col"
};

// ---------------------------------------------------------------------------
// Replays

struct Replay {
  EngineConfig config;
  PolicyId left;
  PolicyId right;
  std::vector<std::pair<TransAction, TransAction>> actions;
  std::string final_digest;  // hex64(state_digest(final state))
};

Replay make_replay(const EngineConfig& config, const PolicyId& left, const PolicyId& right,
                   const MatchResult& r);
void save_replay(const fs::path& path, const Replay& r);
Replay load_replay(const fs::path& path);
// Re-simulates the actions; throws DigestError if the final state differs
// and MalformedError if the match ends early or not at all.
GameState verify_replay(const Replay& r);

// ---------------------------------------------------------------------------
// Manifests and run directories

struct RunManifest {
  std::string run_id;
  std::string created;  // UTC, ISO 8601
  std::string algorithm;
  std::uint64_t seed = 0;
  EngineConfig config;
  std::map<std::string, std::string> params;
  // Relative path -> SHA-256 of the file.
  std::map<std::string, std::string> artifacts;

  // Hashes a file under run_dir and records it.
  void add_artifact(const fs::path& run_dir, const std::string& relative);
};

void save_manifest(const fs::path& run_dir, const RunManifest& m);
// Throws DigestError if an artifact no longer matches its recorded digest.
RunManifest load_manifest(const fs::path& run_dir, bool verify_artifacts = true);

// $ARENALADDER_RUNS, or "runs" under the working directory.
fs::path runs_root();
// Creates runs_root()/<id> with its subdirectories.
fs::path create_run_dir(const std::string& run_id);
std::string utc_now();

// ---------------------------------------------------------------------------
// Config files

// INI sections; the [engine] section is applied to the engine config on top
// of its optional `preset` key, other sections are returned verbatim.
struct ConfigFile {
  EngineConfig engine;
  bool has_engine = false;
  std::map<std::string, std::map<std::string, std::string>> sections;
};

ConfigFile load_config_file(const fs::path& path);

}  // namespace arenaladder

#endif  // ARENALADDER_STORE_H_
