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
#include "arenaladder/store.h"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "arenaladder/presets.h"
#include "json.hpp"

namespace arenaladder {

using json = nlohmann::json;

namespace {

constexpr int kPolicyVersion = 1;
constexpr int kQTableVersion = 1;
constexpr int kMatchLogVersion = 1;
constexpr int kPayoffVersion = 1;
constexpr int kReplayVersion = 1;
constexpr int kManifestVersion = 1;

std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_field(std::string_view text, int line, const char* what) {
  T v{};
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw MalformedError(std::string("bad ") + what + " '" + std::string(text) + "'", line);
  }
  return v;
}

// Lines of a digest-terminated file. Checks the format line and the final
// digest, and returns the body lines (without the format line) with their
// 1-based line numbers.
struct Body {
  std::vector<std::pair<int, std::string>> lines;
};

Body open_digested(const fs::path& path, std::string_view format, int version) {
  const std::string text = read_file(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      start = text.size();
    } else {
      lines.push_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }
  if (lines.empty()) throw MalformedError("empty file " + path.string(), 1);
  const auto head = split_ws(lines[0]);
  if (head.size() != 2 || head[0] != format) {
    throw MalformedError("expected '" + std::string(format) + " <version>'", 1);
  }
  if (head[1] != std::to_string(version)) {
    throw VersionError(path.string() + ": unsupported " + std::string(format) + " version " +
                       head[1] + " (expected " + std::to_string(version) + ")");
  }
  const bool complete = !text.empty() && text.back() == '\n';
  const std::string& last = lines.back();
  if (!complete || lines.size() < 2 || !last.starts_with("sha256 ")) {
    throw MalformedError(path.string() + ": truncated, missing digest",
                         static_cast<int>(lines.size()));
  }
  const std::size_t body_bytes = text.size() - last.size() - 1;
  if (sha256_hex(std::string_view(text).substr(0, body_bytes)) != last.substr(7)) {
    throw DigestError(path.string() + ": content digest mismatch");
  }
  Body b;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    b.lines.emplace_back(static_cast<int>(i) + 1, lines[i]);
  }
  return b;
}

std::string with_digest(std::string body) {
  const std::string d = sha256_hex(body);
  return body + "sha256 " + d + "\n";
}

int line_at(const Body& b, std::size_t i) {
  if (i < b.lines.size()) return b.lines[i].first;
  return b.lines.empty() ? 2 : b.lines.back().first + 1;
}

// "key value" header line of a digested body.
std::string expect_key(const Body& b, std::size_t& i, std::string_view key) {
  if (i >= b.lines.size()) {
    throw MalformedError("missing '" + std::string(key) + "'", line_at(b, i));
  }
  const auto& [line, text] = b.lines[i++];
  if (!text.starts_with(std::string(key) + " ")) {
    throw MalformedError("expected '" + std::string(key) + "'", line);
  }
  return text.substr(key.size() + 1);
}

void check_config(const std::string& recorded, const EngineConfig& config,
                  const fs::path& path) {
  if (recorded != config.digest()) {
    throw VersionError(path.string() + ": written for engine config " + recorded +
                       ", current config is " + config.digest());
  }
}

std::vector<double> parse_probs(const std::vector<std::string>& f, std::size_t from, int n,
                                int line) {
  if (static_cast<int>(f.size() - from) != n) {
    throw MalformedError("expected " + std::to_string(n) + " probabilities", line);
  }
  std::vector<double> p;
  double sum = 0;
  for (std::size_t i = from; i < f.size(); ++i) {
    p.push_back(parse_field<double>(f[i], line, "probability"));
    if (!(p.back() >= 0)) throw MalformedError("negative probability", line);
    sum += p.back();
  }
  if (std::abs(sum - 1) > 1e-9) throw MalformedError("probabilities do not sum to 1", line);
  for (double& x : p) x /= sum;
  return p;
}

PolicyId parse_id(std::string_view text, int line) {
  try {
    return PolicyId::parse(text);
  } catch (const Error& e) {
    throw MalformedError(e.what(), line);
  }
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_policy(const fs::path& path, const PolicyId& id, const TabularPolicy& policy,
                 const EngineConfig& config) {
  std::ostringstream out;
  out << "arenaladder-policy " << kPolicyVersion << "\n";
  out << "config " << config.digest() << "\n";
  out << "id " << id.name() << "\n";
  out << "actions " << policy.num_actions() << "\n";
  out << "default";
  for (double p : policy.default_dist()) out << ' ' << fmt12(p);
  out << "\n";
  for (ObsKey k : policy.sorted_keys()) {
    out << "obs " << Observation::from_key(k).to_string();
    for (double p : policy.get(k)) out << ' ' << fmt12(p);
    out << "\n";
  }
  write_file_atomic(path, with_digest(out.str()));
}

Checkpoint load_policy(const fs::path& path, const EngineConfig& config) {
  const Body b = open_digested(path, "arenaladder-policy", kPolicyVersion);
  std::size_t i = 0;
  check_config(expect_key(b, i, "config"), config, path);
  const int id_line = line_at(b, i);
  const PolicyId id = parse_id(expect_key(b, i, "id"), id_line);
  const int n_line = line_at(b, i);
  const int n = parse_field<int>(expect_key(b, i, "actions"), n_line, "action count");
  if (n != static_cast<int>(config.legal_actions().size())) {
    throw VersionError(path.string() + ": " + std::to_string(n) +
                       " actions, config has " +
                       std::to_string(config.legal_actions().size()));
  }
  const int d_line = line_at(b, i);
  const auto def = split_ws("default " + expect_key(b, i, "default"));
  TabularPolicy p(n, parse_probs(def, 1, n, d_line));
  for (; i < b.lines.size(); ++i) {
    const auto& [line, text] = b.lines[i];
    const auto f = split_ws(text);
    if (f.size() < 2 || f[0] != "obs") throw MalformedError("expected an obs record", line);
    const auto obs = Observation::parse(f[1]);
    if (!obs) throw MalformedError("bad observation '" + f[1] + "'", line);
    const ObsKey k = obs->key();
    if (p.contains(k)) throw MalformedError("duplicate observation", line);
    p.set(k, parse_probs(f, 2, n, line));
  }
  return {id, std::move(p)};
}

void save_qtable(const fs::path& path, const QTable& q, const VisitTable& visits,
                 const EngineConfig& config) {
  const int n = static_cast<int>(config.legal_actions().size());
  std::vector<ObsKey> keys;
  for (const auto& [k, row] : q) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  std::ostringstream out;
  out << "arenaladder-qtable " << kQTableVersion << "\n";
  out << "config " << config.digest() << "\n";
  out << "actions " << n << "\n";
  for (ObsKey k : keys) {
    out << "q " << Observation::from_key(k).to_string();
    for (double v : q.at(k)) out << ' ' << fmt17(v);
    auto it = visits.find(k);
    for (int a = 0; a < n; ++a) out << ' ' << (it == visits.end() ? 0u : it->second[a]);
    out << "\n";
  }
  write_file_atomic(path, with_digest(out.str()));
}

std::pair<QTable, VisitTable> load_qtable(const fs::path& path, const EngineConfig& config) {
  const Body b = open_digested(path, "arenaladder-qtable", kQTableVersion);
  std::size_t i = 0;
  check_config(expect_key(b, i, "config"), config, path);
  const int n_line = line_at(b, i);
  const int n = parse_field<int>(expect_key(b, i, "actions"), n_line, "action count");
  QTable q;
  VisitTable visits;
  for (; i < b.lines.size(); ++i) {
    const auto& [line, text] = b.lines[i];
    const auto f = split_ws(text);
    if (f.size() != static_cast<std::size_t>(2 + 2 * n) || f[0] != "q") {
      throw MalformedError("expected a q record with " + std::to_string(2 * n) + " numbers", line);
    }
    const auto obs = Observation::parse(f[1]);
    if (!obs) throw MalformedError("bad observation '" + f[1] + "'", line);
    std::vector<double> row;
    std::vector<std::uint32_t> count;
    for (int a = 0; a < n; ++a) row.push_back(parse_field<double>(f[2 + a], line, "value"));
    for (int a = 0; a < n; ++a) {
      count.push_back(parse_field<std::uint32_t>(f[2 + n + a], line, "visit count"));
    }
    q[obs->key()] = std::move(row);
    visits[obs->key()] = std::move(count);
  }
  return {std::move(q), std::move(visits)};
}

MatchRecord MatchRecord::from(std::int64_t id, const PolicyId& left, const PolicyId& right,
                              const MatchResult& r, std::string tag) {
  return {id, left, right, r.seed, r.outcome, r.final_hp, r.length, r.dense, std::move(tag)};
}

void append_match(const fs::path& log, const MatchRecord& rec) {
  const bool fresh = !fs::exists(log) || fs::file_size(log) == 0;
  if (log.has_parent_path()) fs::create_directories(log.parent_path());
  std::ofstream out(log, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to " + log.string());
  std::string text;
  if (fresh) {
    text += json{{"format", "arenaladder-matches"}, {"version", kMatchLogVersion}}.dump() + "\n";
  }
  json j = {{"match_id", rec.match_id},
            {"left", rec.left.name()},
            {"right", rec.right.name()},
            {"seed", rec.seed},
            {"outcome", to_string(rec.outcome)},
            {"final_hp", rec.final_hp},
            {"length", rec.length},
            {"dense", {to_string(rec.dense[0]), to_string(rec.dense[1])}},
            {"tag", rec.tag}};
  text += j.dump() + "\n";
  // One write per record so a crash leaves at most a partial last line.
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error("cannot append to " + log.string());
}

std::vector<MatchRecord> read_matches(const fs::path& log) {
  std::vector<MatchRecord> out;
  if (!fs::exists(log)) return out;
  const std::string text = read_file(log);
  std::size_t start = 0;
  int line = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) break;  // interrupted append
    const std::string s = text.substr(start, nl - start);
    start = nl + 1;
    ++line;
    json j;
    try {
      j = json::parse(s);
    } catch (const json::exception& e) {
      throw MalformedError(log.string() + ": " + e.what(), line);
    }
    if (line == 1) {
      if (!j.is_object() || j.value("format", "") != "arenaladder-matches") {
        throw MalformedError(log.string() + ": not a match log", 1);
      }
      if (j.value("version", 0) != kMatchLogVersion) {
        throw VersionError(log.string() + ": unsupported match log version");
      }
      continue;
    }
    MatchRecord r;
    try {
      r.match_id = j.at("match_id").get<std::int64_t>();
      r.left = PolicyId::parse(j.at("left").get<std::string>());
      r.right = PolicyId::parse(j.at("right").get<std::string>());
      r.seed = j.at("seed").get<std::uint64_t>();
      r.outcome = parse_outcome(j.at("outcome").get<std::string>());
      r.final_hp = j.at("final_hp").get<std::array<int, 2>>();
      r.length = j.at("length").get<int>();
      r.dense = {parse_rational(j.at("dense").at(0).get<std::string>()),
                 parse_rational(j.at("dense").at(1).get<std::string>())};
      r.tag = j.value("tag", "");
    } catch (const std::exception& e) {
      throw MalformedError(log.string() + ": " + e.what(), line);
    }
    const int hl = r.final_hp[0], hr = r.final_hp[1];
    const Outcome expected = hl > hr ? Outcome::kLeftWin : hr > hl ? Outcome::kRightWin
                                                                    : Outcome::kDraw;
    if (r.outcome != expected) {
      throw MalformedError(log.string() + ": outcome disagrees with final HPs", line);
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_payoff_csv(const fs::path& path, const PayoffMatrix& m) {
  std::ostringstream out;
  out << "row,col,win_rate,matches\n";
  for (std::size_t r = 0; r < m.num_rows(); ++r) {
    for (std::size_t c = 0; c < m.num_cols(); ++c) {
      out << m.rows()[r].name() << ',' << m.cols()[c].name() << ',';
      if (m.known(r, c)) {
        out << m.win_rate(r, c) << ',' << m.matches(r, c);
      } else {
        out << "unknown,0";
      }
      out << '\n';
    }
  }
  write_file_atomic(path, out.str());
}

namespace {

std::string cache_key(const std::string& digest, const PolicyId& row, const PolicyId& col) {
  return digest + "," + row.name() + "," + col.name();
}

}  // namespace

std::optional<PayoffEntry> PayoffCache::lookup(const std::string& config_digest,
                                               const PolicyId& row,
                                               const PolicyId& col) const {
  auto it = entries_.find(cache_key(config_digest, row, col));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void PayoffCache::put(const std::string& config_digest, const PolicyId& row,
                      const PolicyId& col, const PayoffEntry& e) {
  entries_[cache_key(config_digest, row, col)] = e;
}

void PayoffCache::put_all(const std::string& config_digest, const PayoffMatrix& m) {
  for (std::size_t r = 0; r < m.num_rows(); ++r) {
    for (std::size_t c = 0; c < m.num_cols(); ++c) {
      if (m.known(r, c)) {
        put(config_digest, m.rows()[r], m.cols()[c], {m.win_rate(r, c), m.matches(r, c)});
      }
    }
  }
}

std::size_t PayoffCache::fill(const std::string& config_digest, PayoffMatrix& m) const {
  std::size_t filled = 0;
  for (std::size_t r = 0; r < m.num_rows(); ++r) {
    for (std::size_t c = 0; c < m.num_cols(); ++c) {
      if (m.known(r, c)) continue;
      if (auto e = lookup(config_digest, m.rows()[r], m.cols()[c])) {
        m.set(r, c, e->win_rate, e->matches);
        ++filled;
      }
    }
  }
  return filled;
}

std::size_t PayoffCache::invalidate_except(const std::string& config_digest) {
  return std::erase_if(entries_, [&](const auto& kv) {
    return !kv.first.starts_with(config_digest + ",");
  });
}

void PayoffCache::save(const fs::path& path) const {
  std::ostringstream out;
  out << "arenaladder-payoff " << kPayoffVersion << "\n";
  for (const auto& [key, e] : entries_) {
    out << "entry " << key << ',' << e.win_rate << ',' << e.matches << "\n";
  }
  write_file_atomic(path, with_digest(out.str()));
}

PayoffCache PayoffCache::load(const fs::path& path) {
  PayoffCache cache;
  if (!fs::exists(path)) return cache;
  const Body b = open_digested(path, "arenaladder-payoff", kPayoffVersion);
  for (const auto& [line, text] : b.lines) {
    if (!text.starts_with("entry ")) throw MalformedError("expected an entry", line);
    std::vector<std::string> f;
    std::stringstream ss(text.substr(6));
    for (std::string part; std::getline(ss, part, ',');) f.push_back(part);
    if (f.size() != 5) throw MalformedError("expected digest,row,col,win_rate,matches", line);
    PayoffEntry e;
    try {
      e.win_rate = Exact(f[3]);
      e.win_rate.canonicalize();
    } catch (const std::invalid_argument&) {
      throw MalformedError("bad win rate '" + f[3] + "'", line);
    }
    e.matches = parse_field<int>(f[4], line, "match count");
    if (e.win_rate < 0 || e.win_rate > 1 || e.matches < 1) {
      throw MalformedError("entry out of range", line);
    }
    cache.put(f[0], parse_id(f[1], line), parse_id(f[2], line), e);
  }
  return cache;
}

Replay make_replay(const EngineConfig& config, const PolicyId& left, const PolicyId& right,
                   const MatchResult& r) {
  if (r.trace.size() != static_cast<std::size_t>(r.length)) {
    throw UsageError("make_replay needs a match played with record_trace");
  }
  Replay rep{config, left, right, r.trace, {}};
  GameState s = reset(config);
  for (const auto& [a, b] : r.trace) s = advance(s, a, b, config);
  rep.final_digest = hex64(state_digest(s));
  return rep;
}

void save_replay(const fs::path& path, const Replay& r) {
  json actions = json::array();
  for (const auto& [a, b] : r.actions) actions.push_back({to_string(a), to_string(b)});
  json j = {{"format", "arenaladder-replay"},
            {"version", kReplayVersion},
            {"config", r.config.to_ini()},
            {"config_digest", r.config.digest()},
            {"left", r.left.name()},
            {"right", r.right.name()},
            {"actions", actions},
            {"final_digest", r.final_digest}};
  write_file_atomic(path, j.dump(1) + "\n");
}

namespace {

EngineConfig config_from_ini_text(const std::string& text, int line) {
  EngineConfig c;
  std::istringstream in(text);
  for (std::string s; std::getline(in, s);) {
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw MalformedError("bad config line '" + s + "'", line);
    std::string key = s.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    try {
      c.set(key, s.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw MalformedError(e.what(), line);
    }
  }
  return c;
}

}  // namespace

Replay load_replay(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw MalformedError(path.string() + ": " + e.what(), 1);
  }
  if (j.value("format", "") != "arenaladder-replay") {
    throw MalformedError(path.string() + ": not a replay", 1);
  }
  if (j.value("version", 0) != kReplayVersion) {
    throw VersionError(path.string() + ": unsupported replay version");
  }
  Replay r;
  try {
    r.config = config_from_ini_text(j.at("config").get<std::string>(), 1);
    if (r.config.digest() != j.at("config_digest").get<std::string>()) {
      throw DigestError(path.string() + ": config digest mismatch");
    }
    r.left = PolicyId::parse(j.at("left").get<std::string>());
    r.right = PolicyId::parse(j.at("right").get<std::string>());
    for (const auto& pair : j.at("actions")) {
      const auto a = parse_action(pair.at(0).get<std::string>());
      const auto b = parse_action(pair.at(1).get<std::string>());
      if (!a || !b) throw MalformedError(path.string() + ": unknown action", 1);
      r.actions.emplace_back(*a, *b);
    }
    r.final_digest = j.at("final_digest").get<std::string>();
  } catch (const json::exception& e) {
    throw MalformedError(path.string() + ": " + e.what(), 1);
  } catch (const UsageError& e) {
    throw MalformedError(path.string() + ": " + e.what(), 1);
  }
  return r;
}

GameState verify_replay(const Replay& r) {
  r.config.validate();
  GameState s = reset(r.config);
  int tick = 0;
  for (const auto& [a, b] : r.actions) {
    ++tick;
    if (s.terminal) throw MalformedError("replay continues after the match ended", tick);
    s = advance(s, a, b, r.config);
  }
  if (!s.terminal) throw MalformedError("replay ends before the match does", tick);
  if (hex64(state_digest(s)) != r.final_digest) {
    throw DigestError("replay final state " + hex64(state_digest(s)) + " differs from recorded " +
                      r.final_digest);
  }
  return s;
}

void RunManifest::add_artifact(const fs::path& run_dir, const std::string& relative) {
  artifacts[relative] = sha256_hex(read_file(run_dir / relative));
}

void save_manifest(const fs::path& run_dir, const RunManifest& m) {
  std::ostringstream out;
  out << "arenaladder-manifest " << kManifestVersion << "\n";
  out << "run_id " << m.run_id << "\n";
  out << "created " << m.created << "\n";
  out << "algorithm " << m.algorithm << "\n";
  out << "seed " << m.seed << "\n";
  for (const auto& [k, v] : m.params) out << "param " << k << "=" << v << "\n";
  for (const auto& [path, digest] : m.artifacts) out << "artifact " << digest << " " << path << "\n";
  std::istringstream ini(m.config.to_ini());
  for (std::string s; std::getline(ini, s);) out << "engine " << s << "\n";
  write_file_atomic(run_dir / "manifest", with_digest(out.str()));
}

RunManifest load_manifest(const fs::path& run_dir, bool verify_artifacts) {
  const Body b = open_digested(run_dir / "manifest", "arenaladder-manifest", kManifestVersion);
  RunManifest m;
  std::size_t i = 0;
  m.run_id = expect_key(b, i, "run_id");
  m.created = expect_key(b, i, "created");
  m.algorithm = expect_key(b, i, "algorithm");
  const int seed_line = line_at(b, i);
  m.seed = parse_field<std::uint64_t>(expect_key(b, i, "seed"), seed_line, "seed");
  std::string ini;
  for (; i < b.lines.size(); ++i) {
    const auto& [line, text] = b.lines[i];
    if (text.starts_with("param ")) {
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw MalformedError("expected param key=value", line);
      m.params[text.substr(6, eq - 6)] = text.substr(eq + 1);
    } else if (text.starts_with("artifact ")) {
      const auto f = split_ws(text);
      if (f.size() != 3) throw MalformedError("expected artifact <digest> <path>", line);
      m.artifacts[f[2]] = f[1];
    } else if (text.starts_with("engine ")) {
      ini += text.substr(7) + "\n";
    } else {
      throw MalformedError("unknown manifest record", line);
    }
  }
  m.config = config_from_ini_text(ini, b.lines.empty() ? 1 : b.lines.back().first);
  if (verify_artifacts) {
    for (const auto& [path, digest] : m.artifacts) {
      if (sha256_hex(read_file(run_dir / path)) != digest) {
        throw DigestError((run_dir / path).string() + ": digest does not match the manifest");
      }
    }
  }
  return m;
}

fs::path runs_root() {
  const char* env = std::getenv("ARENALADDER_RUNS");
  return env && *env ? fs::path(env) : fs::path("runs");
}

fs::path create_run_dir(const std::string& run_id) {
  const fs::path dir = runs_root() / run_id;
  for (const char* sub : {"policies", "replays"}) fs::create_directories(dir / sub);
  return dir;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ConfigFile load_config_file(const fs::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  ConfigFile f;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config file: key '" + section + "' outside a section");
    }
    auto& kv = f.sections[section];
    for (const auto& [key, value] : body) kv[key] = value.data();
  }
  if (auto it = f.sections.find("engine"); it != f.sections.end()) {
    f.has_engine = true;
    auto kv = it->second;
    if (auto p = kv.find("preset"); p != kv.end()) {
      try {
        f.engine = preset(p->second);
      } catch (const UsageError& e) {
        throw ConfigError(std::string("config file: ") + e.what());
      }
      kv.erase(p);
    }
    for (const auto& [key, value] : kv) f.engine.set(key, value);
    f.engine.validate();
  }
  return f;
}

}  // namespace arenaladder
