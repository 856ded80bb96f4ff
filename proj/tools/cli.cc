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
#include "cli.h"

#include <algorithm>
#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "arenaladder/eval.h"
#include "arenaladder/metagame.h"
#include "arenaladder/parallel.h"
#include "arenaladder/playserver.h"
#include "arenaladder/presets.h"
#include "arenaladder/store.h"

namespace arenaladder {
namespace {

const std::vector<std::string> kCommands = {"train-single", "train-pop",  "tournament", "exploit",
                                            "ladder",       "replay",     "serve-play"};
const std::vector<std::string> kAlgos = {"ippo", "2timescale", "fsp", "psro", "league"};

// Options shared by every command.
struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  int workers = default_workers();
  std::string preset = "tiny";
  std::vector<std::string> engine_set;
  std::string run_id;
  std::string runs_dir;
};

struct Learning {
  std::string step_size = "1/10";
  std::string exploration = "1/10";
  std::string reward = "dense";

  LearnConfig make(std::int64_t budget, std::uint64_t seed) const {
    LearnConfig lc;
    lc.budget_steps = budget;
    lc.step_size = parse_rational(step_size);
    lc.exploration = parse_rational(exploration);
    lc.seed = seed;
    if (reward == "dense") {
      lc.reward = RewardMode::kDense;
    } else if (reward == "sparse") {
      lc.reward = RewardMode::kSparse;
    } else {
      throw UsageError("--reward must be dense or sparse");
    }
    lc.validate();
    return lc;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--config", c.config_path, "INI file: [engine] plus one section per command");
  cmd->add_option("--seed", c.seed, "Base seed; every artifact is a function of it")
      ->capture_default_str();
  cmd->add_option("--workers", c.workers, "Match-simulation threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--preset", c.preset, "Engine preset: tiny, small or default")
      ->capture_default_str();
  cmd->add_option("--set", c.engine_set, "Engine override key=value (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cmd->add_option("--run-id", c.run_id, "Run directory name under the runs root");
  cmd->add_option("--runs-dir", c.runs_dir, "Runs root (default $ARENALADDER_RUNS or ./runs)");
}

void add_learning(CLI::App* cmd, Learning& l) {
  cmd->add_option("--step-size", l.step_size, "Learning rate floor")->capture_default_str();
  cmd->add_option("--exploration", l.exploration, "Epsilon")->capture_default_str();
  cmd->add_option("--reward", l.reward, "dense or sparse")->capture_default_str();
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> levels;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    try {
      if (auto dash = part.find('-'); dash != std::string::npos) {
        const int lo = std::stoi(part.substr(0, dash));
        const int hi = std::stoi(part.substr(dash + 1));
        if (lo > hi) throw UsageError("");
        for (int l = lo; l <= hi; ++l) levels.push_back(l);
      } else {
        levels.push_back(std::stoi(part));
      }
    } catch (const std::exception&) {
      throw UsageError("bad level list '" + text + "' (use e.g. 1-8 or 1,3,5)");
    }
  }
  for (int l : levels) {
    if (l < 1 || l > 8) throw UsageError("CPU level " + std::to_string(l) + " outside 1..8");
  }
  if (levels.empty()) throw UsageError("empty level list");
  return levels;
}

std::string join(const std::vector<std::string>& v, const char* sep = ",") {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
  return s;
}

// Engine config: preset (flag, else the file's [engine] preset key, else
// tiny), then the file's [engine] keys, then --set overrides.
EngineConfig build_engine(const Common& c, const CLI::App* cmd,
                          const std::map<std::string, std::string>* file_engine) {
  std::string name = c.preset;
  if (cmd->get_option("--preset")->count() == 0 && file_engine) {
    if (auto it = file_engine->find("preset"); it != file_engine->end()) name = it->second;
  }
  EngineConfig cfg = preset(name);
  if (file_engine) {
    for (const auto& [k, v] : *file_engine) {
      if (k != "preset") cfg.set(k, v);
    }
  }
  for (const auto& kv : c.engine_set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

struct Loaded {
  PolicyId id;
  PolicyPtr policy;
};

// A checkpoint path, or cpu:<level> for a scripted opponent.
Loaded load_spec(const std::string& spec, const EngineConfig& cfg) {
  if (spec.rfind("cpu:", 0) == 0) {
    const int level = parse_levels(spec.substr(4)).front();
    return {PolicyId{"CPU", Side::kLeft, level}, std::make_shared<ScriptedCPU>(level, cfg)};
  }
  Checkpoint ck = load_policy(spec, cfg);
  return {ck.id, std::make_shared<TabularPolicy>(std::move(ck.policy))};
}

// One command invocation: run directory, manifest and artifact list.
class Run {
 public:
  Run(const Common& c, const std::string& command, const CLI::App* cmd, EngineConfig cfg)
      : cfg_(std::move(cfg)) {
    std::string id = c.run_id;
    if (id.empty()) {
      std::string stamp = utc_now();
      std::erase(stamp, ':');
      std::erase(stamp, '-');
      id = command + "-s" + std::to_string(c.seed) + "-" + stamp;
      const std::string base = id;
      for (int i = 2; fs::exists(runs_root() / id); ++i) id = base + "-" + std::to_string(i);
    } else if (id.find('/') != std::string::npos || id == "." || id == "..") {
      throw UsageError("--run-id must be a plain name");
    } else if (fs::exists(runs_root() / id)) {
      throw UsageError("run directory " + (runs_root() / id).string() + " already exists");
    }
    dir_ = create_run_dir(id);
    manifest_.run_id = id;
    manifest_.created = utc_now();
    manifest_.algorithm = command;
    manifest_.seed = c.seed;
    manifest_.config = cfg_;
    for (const CLI::Option* o : cmd->get_options()) {
      if (o->get_lnames().empty() || o->get_lnames()[0] == "help") continue;
      const auto res = o->reduced_results();
      manifest_.params[o->get_lnames()[0]] = res.empty() ? o->get_default_str() : join(res);
    }
  }

  const fs::path& dir() const { return dir_; }
  const EngineConfig& config() const { return cfg_; }
  RunManifest& manifest() { return manifest_; }

  void write(const std::string& rel, const std::string& content) {
    write_file_atomic(dir_ / rel, content);
    manifest_.add_artifact(dir_, rel);
  }
  void save(const PolicyId& id, const TabularPolicy& p) {
    const std::string rel = "policies/" + id.name() + ".policy";
    save_policy(dir_ / rel, id, p, cfg_);
    manifest_.add_artifact(dir_, rel);
  }
  void record(const std::string& rel) { manifest_.add_artifact(dir_, rel); }

  void finish(std::ostream& out) {
    save_manifest(dir_, manifest_);
    out << "manifest: " << (dir_ / "manifest").string() << "\n";
  }

 private:
  EngineConfig cfg_;
  fs::path dir_;
  RunManifest manifest_;
};

std::string ladder_csv(const std::vector<LadderRow>& rows) {
  std::ostringstream out;
  out << "level,matches,wins,draws,win_rate,std_error\n";
  for (const auto& r : rows) {
    out << r.level << "," << r.stats.matches << "," << r.stats.wins << "," << r.stats.draws
        << "," << to_string(r.stats.win_rate) << "," << r.stats.std_error << "\n";
  }
  return out.str();
}

std::string meta_csv(const std::vector<PolicyId>& left, const MetaStrategy& l,
                     const std::vector<PolicyId>& right, const MetaStrategy& r) {
  std::ostringstream out;
  out << "side,policy,weight\n";
  for (std::size_t i = 0; i < left.size(); ++i) {
    out << "left," << left[i].name() << "," << to_string(l[i]) << "\n";
  }
  for (std::size_t i = 0; i < right.size(); ++i) {
    out << "right," << right[i].name() << "," << to_string(r[i]) << "\n";
  }
  return out.str();
}

const TabularPolicy& as_tabular(const PolicyPtr& p) {
  const auto* t = dynamic_cast<const TabularPolicy*>(p.get());
  if (!t) throw Error("internal: population member is not tabular");
  return *t;
}

// ---------------------------------------------------------------------------
// Commands

struct TrainSingleArgs {
  Learning learn;
  std::int64_t budget = 20000;
  int epochs = 10;
  int eval_matches = 200;
  int final_matches = 400;
  std::string levels = "1-8";
};

void train_single(Run& run, const Common& c, const TrainSingleArgs& a, std::ostream& out) {
  const LearnConfig lc = a.learn.make(a.budget, c.seed);
  CurriculumOptions opts;
  opts.epochs = a.epochs;
  opts.eval_matches = a.eval_matches;
  opts.final_matches = a.final_matches;
  const auto levels = parse_levels(a.levels);
  const CurriculumResult r = full_game_train(run.config(), levels, lc, opts, c.workers);
  run.save(PolicyId{"single", Side::kLeft, 1}, r.policy);
  std::ostringstream curves;
  write_curves_csv(curves, r.curves);
  run.write("curves.csv", curves.str());
  std::ostringstream fin;
  fin << "level,win_rate\n";
  for (std::size_t i = 0; i < r.final_win_rates.size(); ++i) {
    fin << levels[i] << "," << r.final_win_rates[i] << "\n";
    out << "level " << levels[i] << " win_rate " << r.final_win_rates[i] << "\n";
  }
  run.write("final.csv", fin.str());
  out << "steps " << r.steps << "\n";
}

struct LadderArgs {
  std::string checkpoint;
  std::string side = "left";
  std::string levels = "1-8";
  int matches = 200;
};

void ladder(Run& run, const Common& c, const LadderArgs& a, std::ostream& out) {
  const Loaded p = load_spec(a.checkpoint, run.config());
  const auto rows = cpu_ladder(run.config(), *p.policy, parse_side(a.side), parse_levels(a.levels),
                               a.matches, c.seed, c.workers);
  run.write("ladder.csv", ladder_csv(rows));
  for (const auto& r : rows) {
    out << "level " << r.level << " win_rate " << r.stats.win_rate.get_d() << " +- "
        << r.stats.std_error << "\n";
  }
}

struct TrainPopArgs {
  Learning learn;
  std::string algo;
  int iters = 8;
  std::int64_t budget = 0;  // 0: the algorithm's default
  std::int64_t pretrain_steps = 30000;
  std::string pretrain_levels = "1-8";
  std::string oracle = "exact";
  int matches = 0;  // per payoff entry; 0 computes entries exactly
  std::string step_ratio = "1/10";
  std::size_t br_cap = kDefaultBRCap;
};

void train_pop(Run& run, const Common& c, const TrainPopArgs& a, std::ostream& out) {
  const EngineConfig& cfg = run.config();
  std::int64_t budget = a.budget;
  if (budget == 0) {
    budget = (a.algo == "ippo" || a.algo == "2timescale") ? 200000
             : a.algo == "league"                        ? 10000
                                                         : 20000;
  }
  if (a.iters < 1) throw UsageError("--iters must be >= 1");
  if (a.matches < 0) throw UsageError("--matches must be >= 0");

  const QLearner pre =
      pretrain(cfg, a.learn.make(a.pretrain_steps, c.seed), parse_levels(a.pretrain_levels));
  const auto init = std::make_shared<TabularPolicy>(pre.policy());
  out << "pretrained " << pre.table().size() << " observations\n";

  std::optional<BrawlGame> game;
  const auto exact_game = [&]() -> const BrawlGame& {
    if (!game) game.emplace(cfg);
    return *game;
  };
  const PayoffFn payoff =
      a.matches == 0 ? exact_payoff(exact_game()) : sampled_payoff(cfg, a.matches);

  LearnConfig lc = a.learn.make(budget, c.seed);
  if (a.algo == "ippo" || a.algo == "2timescale") {
    const std::string role = a.algo == "ippo" ? "IPPO" : "2TS";
    lc.step_ratio = parse_rational(a.step_ratio);
    const auto [ll, lr] = a.algo == "ippo" ? std::pair{lc, lc} : two_timescale(lc);
    const IndependentResult r = independent_learn(cfg, ll, lr, init.get(), init.get());
    const PolicyId lid{role, Side::kLeft, 1}, rid{role, Side::kRight, 1};
    run.save(PolicyId{"INIT", Side::kLeft, 0}, *init);
    run.save(lid, r.left);
    run.save(rid, r.right);
    std::ostringstream diag;
    diag << "iteration,steps,value_estimate,change_left,change_right\n";
    for (const auto& d : r.diagnostics) {
      diag << d.iteration << "," << d.steps << "," << d.value_estimate << "," << d.change_left
           << "," << d.change_right << "\n";
    }
    run.write("diagnostics.csv", diag.str());
    Population left, right;
    left.add(lid, std::make_shared<TabularPolicy>(r.left));
    right.add(rid, std::make_shared<TabularPolicy>(r.right));
    PayoffMatrix m;
    refresh_payoff(m, left, right, payoff, c.seed, c.workers);
    write_payoff_csv(run.dir() / "payoff.csv", m);
    run.record("payoff.csv");
    out << role << " left vs right win_rate " << m.win_rate(0, 0).get_d() << "\n";
    return;
  }

  if (a.algo == "league") {
    const LeagueResult r = run_league(cfg, a.iters, lc, pre, payoff, c.seed, {}, c.workers);
    const Population pop = r.roster.population();
    for (std::size_t i = 0; i < pop.size(); ++i) run.save(pop.ids[i], as_tabular(pop.policies[i]));
    write_payoff_csv(run.dir() / "payoff.csv", r.payoff);
    run.record("payoff.csv");
    const NashSolution nash = solve_nash(r.payoff);
    run.write("meta.csv", meta_csv(pop.ids, nash.row, pop.ids, nash.col));
    out << "league population " << pop.size() << " nash value " << nash.value.get_d() << "\n";
    return;
  }

  const MetaSolver solver = a.algo == "fsp" ? MetaSolver::kFsp : MetaSolver::kPsro;
  BROracle br;
  if (a.oracle == "exact") {
    br = exact_br_oracle(exact_game(), a.br_cap);
  } else if (a.oracle == "rl") {
    br = rl_br_oracle(cfg, lc);
  } else {
    throw UsageError("--oracle must be exact or rl");
  }
  const LoopResult r = population_loop(solver, a.iters, init, init, br, payoff, c.seed, c.workers);
  for (const Population* pop : {&r.mu, &r.nu}) {
    for (std::size_t i = 0; i < pop->size(); ++i) {
      run.save(pop->ids[i], as_tabular(pop->policies[i]));
    }
  }
  write_payoff_csv(run.dir() / "payoff.csv", r.payoff);
  run.record("payoff.csv");
  run.write("meta.csv", meta_csv(r.mu.ids, r.rho_mu, r.nu.ids, r.rho_nu));
  out << to_string(solver) << " populations " << r.mu.size() << " x " << r.nu.size()
      << " rho_mu";
  for (double w : r.rho_mu.to_doubles()) out << " " << w;
  out << "\n";
}

struct TournamentArgs {
  std::vector<std::string> entrants;
  std::string from_run;
  int rounds = 10;
  double k = kDefaultEloK;
};

void tournament(Run& run, const Common& c, const TournamentArgs& a, std::ostream& out) {
  std::vector<std::string> specs = a.entrants;
  if (!a.from_run.empty()) {
    const fs::path dir = fs::path(a.from_run) / "policies";
    if (!fs::is_directory(dir)) throw UsageError("no policies/ under " + a.from_run);
    std::vector<std::string> found;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".policy") found.push_back(e.path().string());
    }
    std::sort(found.begin(), found.end());
    specs.insert(specs.end(), found.begin(), found.end());
  }
  Population pop;
  std::set<std::string> names;
  for (const auto& s : specs) {
    Loaded l = load_spec(s, run.config());
    if (!names.insert(l.id.name()).second) throw UsageError("duplicate entrant " + l.id.name());
    pop.add(l.id, l.policy);
  }
  const RatingTable t = run_tournament(pop, a.rounds, a.k, run.config(), c.seed, c.workers);
  std::ostringstream elo;
  t.write_csv(elo);
  run.write("elo.csv", elo.str());
  std::ostringstream hist;
  hist << "a,b,outcome,a_before,b_before,a_after,b_after\n";
  hist.precision(17);
  for (const auto& r : t.history()) {
    hist << r.a.name() << "," << r.b.name() << "," << to_string(r.outcome) << "," << r.a_before
         << "," << r.b_before << "," << r.a_after << "," << r.b_after << "\n";
  }
  run.write("elo_history.csv", hist.str());
  out << elo.str();
}

struct ExploitArgs {
  Learning learn;
  std::string target;
  std::string side = "left";
  std::string method = "exact";
  std::int64_t budget = 200000;
  int matches = 1000;
  std::size_t br_cap = kDefaultBRCap;
};

void exploit(Run& run, const Common& c, const ExploitArgs& a, std::ostream& out) {
  const Loaded t = load_spec(a.target, run.config());
  ExploitOptions opts;
  opts.matches = a.matches;
  opts.cap = a.br_cap;
  const ExploitReport r =
      exploitability(run.config(), Opponent::single(t.policy), parse_side(a.side), t.id,
                     parse_exploit_method(a.method), a.learn.make(a.budget, c.seed), opts);
  std::ostringstream rep;
  r.write(rep);
  run.write("exploit.txt", rep.str());
  out << rep.str();
}

struct ReplayArgs {
  std::string verify;
  std::string left;
  std::string right;
};

void replay(Run& run, const Common& c, const ReplayArgs& a, std::ostream& out) {
  const Loaded l = load_spec(a.left, run.config());
  const Loaded r = load_spec(a.right, run.config());
  PolicyId lid = l.id, rid = r.id;
  lid.side = Side::kLeft;
  rid.side = Side::kRight;
  const MatchResult m = play_match(run.config(), *l.policy, *r.policy, c.seed, true);
  const std::string rel = "replays/" + lid.name() + "_vs_" + rid.name() + ".replay";
  save_replay(run.dir() / rel, make_replay(run.config(), lid, rid, m));
  run.record(rel);
  append_match(run.dir() / "matches.log", MatchRecord::from(0, lid, rid, m));
  run.record("matches.log");
  out << "outcome " << to_string(m.outcome) << " final_hp " << m.final_hp[0] << " "
      << m.final_hp[1] << " length " << m.length << "\n";
}

struct ServeArgs {
  std::string checkpoint;
  std::string human_side = "left";
  std::string address = "127.0.0.1";
  int port = 8080;
  int tick_rate = kDefaultTickRate;
  std::string static_dir;
  double duration = 0;  // seconds; 0 serves until SIGINT or SIGTERM
};

void serve_play(Run& run, const Common& c, const ServeArgs& a, std::ostream& out) {
  const Loaded agent = load_spec(a.checkpoint, run.config());
  PlayServerOptions o;
  o.session.config = run.config();
  o.session.human_side = parse_side(a.human_side);
  o.session.agent_id = agent.id;
  o.session.agent_id.side = other(o.session.human_side);
  o.session.agent = agent.policy;
  o.session.tick_rate = a.tick_rate;
  o.session.seed = c.seed;
  o.static_dir = a.static_dir;
  o.match_log = run.dir() / "matches.log";
  o.replay_dir = run.dir() / "replays";
  o.address = a.address;
  if (a.port < 0 || a.port > 65535) throw UsageError("--port outside 0..65535");
  o.port = static_cast<unsigned short>(a.port);
  Session probe("probe", o.session);  // validates the tick rate and agent
  PlayServer server(o);
  const unsigned short port = server.start();
  out << "serving http://" << a.address << ":" << port << "/ (websocket /ws)" << std::endl;

  boost::asio::io_context ioc;
  boost::asio::signal_set signals(ioc, SIGINT, SIGTERM);
  signals.async_wait([&](const boost::system::error_code&, int) { ioc.stop(); });
  if (a.duration > 0) {
    ioc.run_for(std::chrono::milliseconds(static_cast<std::int64_t>(a.duration * 1000)));
  } else {
    ioc.run();
  }
  server.stop();
  const auto results = read_matches(o.match_log);
  if (!results.empty()) run.record("matches.log");
  for (const auto& e : fs::directory_iterator(o.replay_dir)) {
    run.record("replays/" + e.path().filename().string());
  }
  int human = 0;
  for (const auto& m : results) human += half_points(m.outcome, o.session.human_side);
  out << "human matches " << results.size() << " human points " << human / 2.0 << "\n";
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

// --config FILE or --config=FILE anywhere after the command.
std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ArenaLadder: training, evaluation and live play for MiniBrawl", "arenaladder"};
  app.require_subcommand(1);
  app.fallthrough(false);

  Common common;
  TrainSingleArgs ts;
  LadderArgs la;
  TrainPopArgs tp;
  TournamentArgs to;
  ExploitArgs ex;
  ReplayArgs rp;
  ServeArgs sv;

  CLI::App* c_ts = app.add_subcommand("train-single", "Curriculum training against CPU levels");
  add_common(c_ts, common);
  add_learning(c_ts, ts.learn);
  c_ts->add_option("--budget", ts.budget, "Training steps per epoch")->capture_default_str();
  c_ts->add_option("--epochs", ts.epochs, "Curriculum epochs")->capture_default_str();
  c_ts->add_option("--eval-matches", ts.eval_matches, "Matches per level per epoch")
      ->capture_default_str();
  c_ts->add_option("--final-matches", ts.final_matches, "Matches per level at the end")
      ->capture_default_str();
  c_ts->add_option("--levels", ts.levels, "CPU levels, e.g. 1-8")->capture_default_str();

  CLI::App* c_la = app.add_subcommand("ladder", "Win rates of a checkpoint against CPU levels");
  add_common(c_la, common);
  c_la->add_option("--checkpoint", la.checkpoint, "Policy file or cpu:<level>")->required();
  c_la->add_option("--side", la.side, "Side the checkpoint plays")->capture_default_str();
  c_la->add_option("--levels", la.levels, "CPU levels")->capture_default_str();
  c_la->add_option("--matches", la.matches, "Matches per level")->capture_default_str();

  CLI::App* c_tp = app.add_subcommand("train-pop", "Two-player and population training");
  add_common(c_tp, common);
  add_learning(c_tp, tp.learn);
  c_tp->add_option("--algo", tp.algo, "One of " + join(kAlgos, ", "))
      ->required()
      ->check(CLI::IsMember(kAlgos));
  c_tp->add_option("--iters", tp.iters, "Population iterations (league: cycles)")
      ->capture_default_str();
  c_tp->add_option("--budget", tp.budget,
                   "RL steps (0: ippo/2timescale 200000, league 10000 per agent per cycle, "
                   "rl oracle 20000)")
      ->capture_default_str();
  c_tp->add_option("--pretrain-steps", tp.pretrain_steps, "CPU pretraining steps")
      ->capture_default_str();
  c_tp->add_option("--pretrain-levels", tp.pretrain_levels, "CPU levels for pretraining")
      ->capture_default_str();
  c_tp->add_option("--oracle", tp.oracle, "fsp/psro best-response oracle: exact or rl")
      ->capture_default_str();
  c_tp->add_option("--matches", tp.matches, "Matches per payoff entry; 0 computes them exactly")
      ->capture_default_str();
  c_tp->add_option("--step-ratio", tp.step_ratio, "2timescale: slow/fast step-size ratio")
      ->capture_default_str();
  c_tp->add_option("--br-cap", tp.br_cap, "Node cap of the exact best response")
      ->capture_default_str();

  CLI::App* c_to = app.add_subcommand("tournament", "Round-robin Elo tournament");
  add_common(c_to, common);
  c_to->add_option("--entrant", to.entrants, "Policy file or cpu:<level> (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  c_to->add_option("--from-run", to.from_run, "Add every policy of an earlier run directory");
  c_to->add_option("--rounds", to.rounds, "Rounds per ordered pair")->capture_default_str();
  c_to->add_option("--k", to.k, "Elo K factor")->capture_default_str();

  CLI::App* c_ex = app.add_subcommand("exploit", "Exploitability of a checkpoint");
  add_common(c_ex, common);
  add_learning(c_ex, ex.learn);
  c_ex->add_option("--target", ex.target, "Policy file or cpu:<level>")->required();
  c_ex->add_option("--side", ex.side, "Side the target plays")->capture_default_str();
  c_ex->add_option("--method", ex.method, "exact or rl")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "rl"}));
  c_ex->add_option("--budget", ex.budget, "RL exploiter steps")->capture_default_str();
  c_ex->add_option("--matches", ex.matches, "RL evaluation matches")->capture_default_str();
  c_ex->add_option("--br-cap", ex.br_cap, "Node cap of the exact best response")
      ->capture_default_str();

  CLI::App* c_rp = app.add_subcommand("replay", "Record or verify a replay");
  add_common(c_rp, common);
  c_rp->add_option("--verify", rp.verify, "Replay file to re-simulate");
  c_rp->add_option("--left", rp.left, "Left policy file or cpu:<level>");
  c_rp->add_option("--right", rp.right, "Right policy file or cpu:<level>");

  CLI::App* c_sv = app.add_subcommand("serve-play", "Live human-vs-agent play server");
  add_common(c_sv, common);
  c_sv->add_option("--checkpoint", sv.checkpoint, "Agent policy file or cpu:<level>")
      ->required();
  c_sv->add_option("--human-side", sv.human_side, "left or right")->capture_default_str();
  c_sv->add_option("--address", sv.address, "Listen address")->capture_default_str();
  c_sv->add_option("--port", sv.port, "Listen port (0 picks one)")->capture_default_str();
  c_sv->add_option("--tick-rate", sv.tick_rate, "Engine steps per second, 1..30")
      ->capture_default_str();
  c_sv->add_option("--static-dir", sv.static_dir, "Client bundle directory");
  c_sv->add_option("--duration", sv.duration, "Seconds to serve; 0 until interrupted")
      ->capture_default_str();

  // File values go in front of the user's flags; TakeLast lets flags win.
  std::vector<std::string> argv = args.empty() ? std::vector<std::string>{"arenaladder"} : args;
  std::optional<ConfigFile> file;
  try {
    if (auto path = find_config(argv); path && argv.size() > 1) {
      file = load_config_file(*path);
      if (auto it = file->sections.find(argv[1]); it != file->sections.end()) {
        std::vector<std::string> flags;
        for (const auto& [k, v] : it->second) {
          if (k == "set") throw UsageError("config file: use the [engine] section instead of set");
          flags.push_back("--" + k + "=" + v);
        }
        argv.insert(argv.begin() + 2, flags.begin(), flags.end());
      }
      for (const auto& [section, body] : file->sections) {
        if (section != "engine" &&
            std::find(kCommands.begin(), kCommands.end(), section) == kCommands.end()) {
          throw UsageError("config file: unknown section [" + section + "]");
        }
      }
    }
  } catch (const Error& e) {
    err << "arenaladder: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  std::vector<const char*> cargv;
  for (const auto& s : argv) cargv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    // --help: help() shows the selected subcommand's page.
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "arenaladder: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  try {
    if (!common.runs_dir.empty()) ::setenv("ARENALADDER_RUNS", common.runs_dir.c_str(), 1);
    const std::map<std::string, std::string>* file_engine = nullptr;
    if (file) {
      if (auto it = file->sections.find("engine"); it != file->sections.end()) {
        file_engine = &it->second;
      }
    }
    EngineConfig cfg = build_engine(common, cmd, file_engine);

    if (name == "replay" && !rp.verify.empty()) {
      if (!rp.left.empty() || !rp.right.empty()) {
        throw UsageError("replay: --verify excludes --left/--right");
      }
      const Replay r = load_replay(rp.verify);
      const GameState end = verify_replay(r);
      out << "verified " << r.left.name() << " vs " << r.right.name() << " outcome "
          << to_string(end.winner.value_or(Outcome::kDraw)) << " digest " << r.final_digest
          << "\n";
      return kExitOk;
    }
    if (name == "replay" && (rp.left.empty() || rp.right.empty())) {
      throw UsageError("replay: give --verify FILE or both --left and --right");
    }
    if (name == "tournament" && to.entrants.empty() && to.from_run.empty()) {
      throw UsageError("tournament: give --entrant (at least two) or --from-run");
    }

    Run run(common, name == "train-pop" ? "train-pop-" + tp.algo : name, cmd, std::move(cfg));
    if (name == "train-single") {
      train_single(run, common, ts, out);
    } else if (name == "ladder") {
      ladder(run, common, la, out);
    } else if (name == "train-pop") {
      train_pop(run, common, tp, out);
    } else if (name == "tournament") {
      tournament(run, common, to, out);
    } else if (name == "exploit") {
      exploit(run, common, ex, out);
    } else if (name == "replay") {
      replay(run, common, rp, out);
    } else {
      serve_play(run, common, sv, out);
    }
    run.finish(out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "arenaladder " << name << ": " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "arenaladder " << name << ": " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "arenaladder " << name << ": " << one_line(e.what()) << "\n";
    return kExitRuntime;
  }
}

}  // namespace arenaladder
