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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "arenaladder/store.h"
#include "cli.h"
#include "doctest.h"

namespace arenaladder {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

class Cli {
 public:
  Cli() : root_(fs::temp_directory_path() / ("arenaladder_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  ~Cli() { fs::remove_all(root_); }

  Result operator()(std::vector<std::string> args) {
    args.insert(args.begin(), "arenaladder");
    if (args.size() > 1 && args[1] != "--help") {
      args.push_back("--runs-dir");
      args.push_back(root_.string());
    }
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
  }
  fs::path run(const std::string& id) const { return root_ / id; }
  fs::path file(const std::string& name, const std::string& content) const {
    std::ofstream(root_ / name) << content;
    return root_ / name;
  }

 private:
  fs::path root_;
};

int lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

std::string param(const RunManifest& m, const std::string& key) {
  const auto it = m.params.find(key);
  return it == m.params.end() ? "" : it->second;
}

TEST_CASE("unknown algorithm is a usage error listing the valid ones") {
  Cli cli;
  const Result r = cli({"train-pop", "--algo", "nash++"});
  CHECK(r.code == kExitUsage);
  CHECK(lines(r.err) == 1);
  for (const char* algo : {"ippo", "2timescale", "fsp", "psro", "league"}) {
    CHECK(r.err.find(algo) != std::string::npos);
  }
}

TEST_CASE("usage and runtime failures") {
  Cli cli;
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"exploit"}).code == kExitUsage);  // --target is required
  CHECK(cli({"exploit", "--target", "cpu:1", "--bogus", "1"}).code == kExitUsage);
  CHECK(cli({"exploit", "--target", "cpu:9"}).code == kExitUsage);
  CHECK(cli({"exploit", "--target", "cpu:1", "--set", "max_hp=-3"}).code == kExitUsage);
  const Result missing = cli({"exploit", "--target", "no/such.policy"});
  CHECK(missing.code == kExitRuntime);
  CHECK(lines(missing.err) == 1);
  const Result help = cli({"train-pop", "--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("--algo") != std::string::npos);
}

TEST_CASE("psro payoff matrix is byte-identical across runs") {
  Cli cli;
  for (const char* id : {"a", "b"}) {
    const Result r = cli({"train-pop", "--algo", "psro", "--iters", "6", "--seed", "7", "--run-id", id});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("manifest: " + (cli.run(id) / "manifest").string()) != std::string::npos);
  }
  const std::string a = read_file(cli.run("a") / "payoff.csv");
  CHECK(a == read_file(cli.run("b") / "payoff.csv"));
  CHECK(a.rfind("row,col,win_rate,matches\n", 0) == 0);
  const RunManifest m = load_manifest(cli.run("a"));
  CHECK(m.algorithm == "train-pop-psro");
  CHECK(m.seed == 7);
  CHECK(m.artifacts.contains("payoff.csv"));
  CHECK(m.artifacts.contains("policies/PSRO_left_5.policy"));
  CHECK(!m.artifacts.contains("policies/PSRO_left_7.policy"));
  CHECK(cli({"train-pop", "--algo", "psro", "--run-id", "a"}).code == kExitUsage);
}

TEST_CASE("exact exploit of a checkpoint prints a consistent report") {
  Cli cli;
  REQUIRE(cli({"train-pop", "--algo", "fsp", "--iters", "2", "--run-id", "p"}).code == kExitOk);
  const Result r = cli({"exploit", "--target", (cli.run("p") / "policies/FSP_left_1.policy").string(),
                        "--method", "exact", "--run-id", "x"});
  REQUIRE(r.code == kExitOk);
  std::map<std::string, std::string> kv;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) {
    if (auto eq = line.find('='); eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  CHECK(kv["target"] == "FSP_left_1");
  CHECK(kv["method"] == "exact");
  const Exact w = parse_exact(kv["exploit_winrate"]);
  CHECK(w >= 0);
  CHECK(w <= 1);
  CHECK(parse_exact(kv["exploit_gap"]) == 2 * w - 1);
  CHECK(read_file(cli.run("x") / "exploit.txt") == r.out.substr(0, r.out.find("manifest:")));
}

TEST_CASE("config file values sit between defaults and flags") {
  Cli cli;
  const fs::path ini = cli.file("c.ini",
                                "[engine]\npreset = tiny\nmax_hp = 3\nhp_buckets = 4\n"
                                "[train-pop]\nalgo = fsp\niters = 3\nseed = 4\n");
  REQUIRE(cli({"train-pop", "--config", ini.string(), "--iters", "2", "--run-id", "c"}).code ==
          kExitOk);
  const RunManifest m = load_manifest(cli.run("c"));
  CHECK(param(m, "iters") == "2");
  CHECK(param(m, "seed") == "4");
  CHECK(param(m, "algo") == "fsp");
  CHECK(m.config.max_hp == 3);
  CHECK(m.config.arena_width == 5);
  CHECK(cli({"train-pop", "--config", ini.string(), "--iters", "1", "--set", "max_hp=2",
             "--set", "hp_buckets=3", "--run-id", "d"})
            .code == kExitOk);
  CHECK(load_manifest(cli.run("d")).config.max_hp == 2);
  CHECK(cli({"exploit", "--config", cli.file("bad.ini", "[bogus]\nx = 1\n").string(), "--target",
             "cpu:1"})
            .code == kExitUsage);
  CHECK(cli({"exploit", "--config", cli.file("bad2.ini", "[exploit]\nnope = 1\n").string(),
             "--target", "cpu:1"})
            .code == kExitUsage);
}

TEST_CASE("replay record and verify") {
  Cli cli;
  REQUIRE(cli({"replay", "--left", "cpu:2", "--right", "cpu:7", "--seed", "3", "--run-id", "r"})
              .code == kExitOk);
  const fs::path rep = cli.run("r") / "replays/CPU_left_2_vs_CPU_right_7.replay";
  REQUIRE(fs::exists(rep));
  const Result v = cli({"replay", "--verify", rep.string()});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("verified CPU_left_2 vs CPU_right_7") == 0);
  const auto log = read_matches(cli.run("r") / "matches.log");
  REQUIRE(log.size() == 1);
  CHECK(v.out.find(std::string(to_string(log[0].outcome))) != std::string::npos);
  CHECK(cli({"replay", "--left", "cpu:2"}).code == kExitUsage);
}

TEST_CASE("tournament and ladder write their tables") {
  Cli cli;
  REQUIRE(cli({"tournament", "--entrant", "cpu:1", "--entrant", "cpu:8", "--rounds", "3",
               "--run-id", "t"})
              .code == kExitOk);
  const std::string elo = read_file(cli.run("t") / "elo.csv");
  CHECK(elo.rfind("rank,policy,elo,matches\n", 0) == 0);
  CHECK(lines(elo) == 3);
  CHECK(cli({"tournament", "--entrant", "cpu:1", "--entrant", "cpu:1"}).code == kExitUsage);
  REQUIRE(cli({"ladder", "--checkpoint", "cpu:5", "--levels", "1,3", "--matches", "10",
               "--run-id", "l"})
              .code == kExitOk);
  CHECK(lines(read_file(cli.run("l") / "ladder.csv")) == 3);
}

}  // namespace
}  // namespace arenaladder
