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
// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only name[,name...]] [--strict] [--workers N] [--report FILE]
//
// The exit status is 0 once every selected criterion has run, whatever the
// verdicts; --strict makes any FAIL exit 1. --report also writes the lines
// to FILE.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.h"
#include "arenaladder/eval.h"
#include "arenaladder/metagame.h"
#include "arenaladder/nash.h"
#include "arenaladder/parallel.h"
#include "arenaladder/presets.h"
#include "arenaladder/simulate.h"

namespace arenaladder {
namespace {

int g_workers = default_workers();

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// ---------------------------------------------------------------------------
// Nash solver

// Shapley-Snow: some equilibrium is the solution of a square nonsingular
// subgame with equalized payoffs. Tries every square support pair.
std::optional<Exact> kernel_value(const ExactMatrix& a) {
  const int m = static_cast<int>(a.size()), n = static_cast<int>(a[0].size());
  // Solves M z = b in place; false if singular.
  const auto solve = [](std::vector<std::vector<Exact>> M, std::vector<Exact> b,
                        std::vector<Exact>& z) {
    const std::size_t k = b.size();
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t p = c;
      while (p < k && M[p][c] == 0) ++p;
      if (p == k) return false;
      std::swap(M[p], M[c]);
      std::swap(b[p], b[c]);
      for (std::size_t r = 0; r < k; ++r) {
        if (r == c || M[r][c] == 0) continue;
        const Exact f = M[r][c] / M[c][c];
        for (std::size_t j = c; j < k; ++j) M[r][j] -= f * M[c][j];
        b[r] -= f * b[c];
      }
    }
    z.resize(k);
    for (std::size_t i = 0; i < k; ++i) z[i] = b[i] / M[i][i];
    return true;
  };
  for (int rows = 1; rows < (1 << m); ++rows) {
    for (int cols = 1; cols < (1 << n); ++cols) {
      std::vector<int> R, C;
      for (int i = 0; i < m; ++i) if (rows >> i & 1) R.push_back(i);
      for (int j = 0; j < n; ++j) if (cols >> j & 1) C.push_back(j);
      if (R.size() != C.size()) continue;
      const std::size_t k = R.size();
      // Unknowns x_R, v: sum_i x_i a_ij = v for j in C, sum x = 1.
      std::vector<std::vector<Exact>> Mx(k + 1, std::vector<Exact>(k + 1, Exact(0)));
      std::vector<std::vector<Exact>> My(k + 1, std::vector<Exact>(k + 1, Exact(0)));
      std::vector<Exact> b(k + 1, Exact(0));
      b[k] = 1;
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
          Mx[r][c] = a[R[c]][C[r]];
          My[r][c] = a[R[r]][C[c]];
        }
        Mx[r][k] = -1;
        My[r][k] = -1;
        Mx[k][r] = 1;
        My[k][r] = 1;
      }
      std::vector<Exact> x, y;
      if (!solve(Mx, b, x) || !solve(My, b, y)) continue;
      const Exact v = x[k];
      if (y[k] != v) continue;
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) ok = x[i] >= 0 && y[i] >= 0;
      std::vector<Exact> xf(m, Exact(0)), yf(n, Exact(0));
      for (std::size_t i = 0; i < k; ++i) {
        xf[R[i]] = x[i];
        yf[C[i]] = y[i];
      }
      for (int j = 0; j < n && ok; ++j) {
        Exact s = 0;
        for (int i = 0; i < m; ++i) s += xf[i] * a[i][j];
        ok = s >= v;
      }
      for (int i = 0; i < m && ok; ++i) {
        Exact s = 0;
        for (int j = 0; j < n; ++j) s += a[i][j] * yf[j];
        ok = s <= v;
      }
      if (ok) return v;
    }
  }
  return std::nullopt;
}

bool is_distribution(const std::vector<Exact>& p, std::size_t n) {
  if (p.size() != n) return false;
  Exact s = 0;
  for (const auto& x : p) {
    if (x < 0) return false;
    s += x;
  }
  return s == 1;
}

Verdict nash_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> failures;
  // Win-rate form; the zero-sum game is win_rate - 1/2.
  ExactMatrix rps = {{frac(1, 2), 0, 1}, {1, frac(1, 2), 0}, {0, 1, frac(1, 2)}};
  for (auto& row : rps) for (auto& x : row) x -= frac(1, 2);
  const MatrixSolution s = solve_zero_sum(rps);
  const std::vector<Exact> third(3, frac(1, 3));
  if (s.row != third || s.col != third || s.value != 0) failures.push_back("rps");
  const MatrixSolution mp = solve_zero_sum({{1, -1}, {-1, 1}});
  if (mp.row != std::vector<Exact>(2, frac(1, 2)) || mp.col != mp.row || mp.value != 0) {
    failures.push_back("matching pennies");
  }

  Rng rng(2026);
  int closed_form = 0, unique_2x2 = 0;
  // 200 games of random shape 2..6 x 2..6, then 100 each of 2x2 and 3x3.
  for (int t = 0; t < 400; ++t) {
    const int m = t < 200 ? 2 + static_cast<int>(rng.below(5)) : t < 300 ? 2 : 3;
    const int n = t < 200 ? 2 + static_cast<int>(rng.below(5)) : m;
    ExactMatrix a(m, std::vector<Exact>(n));
    for (auto& row : a) {
      for (auto& x : row) {
        x = frac(static_cast<long>(rng.below(21)) - 10, 1 + static_cast<long>(rng.below(6)));
      }
    }
    const MatrixSolution r = solve_zero_sum(a);
    const bool ok = is_distribution(r.row, m) && is_distribution(r.col, n) &&
                    row_guarantee(a, r.row) == r.value && col_guarantee(a, r.col) == r.value;
    if (!ok) failures.push_back("gap #" + std::to_string(t));
    if ((m == 2 && n == 2) || (m == 3 && n == 3)) {
      ++closed_form;
      const auto v = kernel_value(a);
      if (!v || *v != r.value) failures.push_back("closed form #" + std::to_string(t));
    }
    if (m == 2 && n == 2) {
      // No saddle point: the mixed equilibrium is unique.
      const Exact &p = a[0][0], &q = a[0][1], &u = a[1][0], &w = a[1][1];
      const Exact maximin = std::max(std::min(p, q), std::min(u, w));
      const Exact minimax = std::min(std::max(p, u), std::max(q, w));
      if (maximin != minimax) {
        ++unique_2x2;
        const Exact d = p - q - u + w;
        const Exact x = (w - u) / d, y = (w - q) / d;
        if (r.row[0] != x || r.col[0] != y || r.value != (p * w - q * u) / d) {
          failures.push_back("2x2 formula #" + std::to_string(t));
        }
      } else if (r.value != maximin) {
        failures.push_back("2x2 saddle #" + std::to_string(t));
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 30) failures.push_back("runtime " + fmt(secs, 1) + "s");
  std::string detail = "rps, pennies, 400 random games with zero duality gap, " + std::to_string(closed_form) +
                       " small games by support enumeration (" + std::to_string(unique_2x2) +
                       " unique 2x2 by formula)";
  if (!failures.empty()) detail = "failed: " + failures.front() + " and " +
                                  std::to_string(failures.size() - 1) + " more";
  return {failures.empty(), detail};
}

// ---------------------------------------------------------------------------
// Exact best response

EngineConfig random_tiny(Rng& rng) {
  static const std::vector<TransAction> pool = [] {
    std::vector<TransAction> v = {TransAction::noop()};
    for (int i = 0; i < kNumMotions; ++i) v.push_back(TransAction::motion(static_cast<Motion>(i)));
    for (int i = 0; i < kNumAttacks; ++i) v.push_back(TransAction::attack(static_cast<Attack>(i)));
    return v;
  }();
  EngineConfig c = tiny_config();
  c.arena_width = 5 + static_cast<int>(rng.below(3));
  c.max_hp = 2 + static_cast<int>(rng.below(4));
  c.horizon = 1 + static_cast<int>(rng.below(6));
  c.hp_buckets = c.max_hp + 1;
  c.timer_buckets = c.horizon + 1;
  c.bonus_scale = Rational(c.max_hp);
  c.hitstun_frames = static_cast<int>(rng.below(3));
  c.blockstun_frames = static_cast<int>(rng.below(3));
  c.chip_fraction = Rational(static_cast<int>(rng.below(3)), 2);
  for (auto& d : c.damage_table) {
    d = {1 + static_cast<int>(rng.below(3)), static_cast<int>(rng.below(3)),
         static_cast<int>(rng.below(2)), static_cast<int>(rng.below(3))};
  }
  std::vector<TransAction> acts = pool;
  const std::size_t k = 2 + rng.below(3);
  for (std::size_t i = 0; i < k; ++i) std::swap(acts[i], acts[i + rng.below(acts.size() - i)]);
  acts.resize(k);
  std::sort(acts.begin(), acts.end());
  c.action_set = acts;
  return c;
}

// Stochastic table with random support over every observation.
std::shared_ptr<TabularPolicy> random_table(const EngineConfig& cfg, Rng& rng) {
  const int n = static_cast<int>(cfg.legal_actions().size());
  auto p = std::make_shared<TabularPolicy>(n);
  for (const Observation& o : enumerate_observations(cfg).observations) {
    std::vector<double> d(n);
    double sum = 0;
    for (double& x : d) sum += x = rng.below(3) == 0 ? static_cast<double>(1 + rng.below(3)) : 0;
    if (sum == 0) {
      d[rng.below(n)] = 1;
      sum = 1;
    }
    for (double& x : d) x /= sum;
    p->set(o.key(), d);
  }
  return p;
}

Verdict exact_br_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(77);
  struct Case {
    EngineConfig cfg;
    PolicyPtr opp;
    Side responder;
  };
  std::vector<Case> cases;
  std::size_t max_obs = 0;
  int max_h = 0;
  while (cases.size() < 50) {
    EngineConfig cfg = random_tiny(rng);
    const std::size_t obs = enumerate_observations(cfg).count();
    if (obs > 500 || obs == 0) continue;
    max_obs = std::max(max_obs, obs);
    max_h = std::max(max_h, cfg.horizon);
    auto opp = random_table(cfg, rng);
    cases.push_back({cfg, opp, rng.below(2) ? Side::kRight : Side::kLeft});
  }
  std::vector<int> status(cases.size(), 0);  // 1 enumerated, 2 history tree, -1 mismatch
  std::vector<std::size_t> counts(cases.size(), 0);
  parallel_for(cases.size(), g_workers, [&](std::size_t i) {
    const BrawlGame g(cases[i].cfg);
    const Opponent opp = Opponent::single(cases[i].opp);
    const Exact v = exact_best_response(g, opp, cases[i].responder).value;
    if (auto e = oracle::enumerate_policies(g, opp, cases[i].responder, 100000)) {
      counts[i] = e->policies;
      status[i] = e->best == v ? 1 : -1;
    } else {
      status[i] = oracle::tree_best(g, opp, cases[i].responder) == v ? 2 : -1;
    }
  });
  int enumerated = 0, tree = 0, bad = 0;
  std::size_t policies = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    enumerated += status[i] == 1;
    tree += status[i] == 2;
    bad += status[i] == -1;
    policies += counts[i];
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string detail = std::to_string(enumerated) + "/50 equal to enumeration over " +
                       std::to_string(policies) + " deterministic policies, " +
                       std::to_string(tree) + "/50 too many to list, equal to the history tree; " +
                       std::to_string(bad) + " mismatches; max " + std::to_string(max_obs) +
                       " observations, H<=" + std::to_string(max_h);
  return {bad == 0 && secs < 300, detail};
}

// ---------------------------------------------------------------------------
// Tiny-preset methods, shared by the PSRO and robustness criteria

constexpr int kSeeds = 5;

struct TinyRun {
  double pretrained = 0;       // exploit of the pretrained policy as left
  double pretrained_sym = 0;   // mean over both sides
  double psro = 0, fsp = 0;    // row meta-strategy after 8 iterations
  double psro_sym = 0, league_sym = 0, ippo_sym = 0, tts_sym = 0;
};

double exploit_left(const BrawlGame& g, const Opponent& o) {
  return exact_best_response(g, o, Side::kRight).win_prob.get_d();
}
double exploit_right(const BrawlGame& g, const Opponent& o) {
  return exact_best_response(g, o, Side::kLeft).win_prob.get_d();
}
Opponent mix(const Population& p, const MetaStrategy& w) { return {p.policies, w.weights()}; }

std::vector<TinyRun>& tiny_runs() {
  static std::vector<TinyRun> runs = [] {
    std::vector<TinyRun> out(kSeeds);
    const EngineConfig cfg = tiny_config();
    const BrawlGame g(cfg);
    parallel_for(kSeeds, g_workers, [&](std::size_t i) {
      const std::uint64_t seed = i + 1;
      TinyRun& r = out[i];
      LearnConfig plc;
      plc.budget_steps = 30000;
      plc.seed = seed;
      const QLearner pre = pretrain(cfg, plc, {1, 2, 3, 4, 5, 6, 7, 8});
      const auto init = std::make_shared<TabularPolicy>(pre.policy());
      const Opponent solo = Opponent::single(init);
      r.pretrained = exploit_left(g, solo);
      r.pretrained_sym = (r.pretrained + exploit_right(g, solo)) / 2;

      const LoopResult psro = population_loop(MetaSolver::kPsro, 8, init, init,
                                              exact_br_oracle(g), exact_payoff(g), seed);
      const LoopResult fsp = population_loop(MetaSolver::kFsp, 8, init, init, exact_br_oracle(g),
                                             exact_payoff(g), seed);
      r.psro = exploit_left(g, mix(psro.mu, psro.rho_mu));
      r.fsp = exploit_left(g, mix(fsp.mu, fsp.rho_mu));
      r.psro_sym = (r.psro + exploit_right(g, mix(psro.nu, psro.rho_nu))) / 2;

      LearnConfig llc;
      llc.budget_steps = 10000;
      llc.seed = seed;
      const LeagueResult league = run_league(cfg, 8, llc, pre, exact_payoff(g), seed);
      const Population pop = league.roster.population();
      const NashSolution nash = solve_nash(league.payoff);
      r.league_sym = (exploit_left(g, mix(pop, nash.row)) + exploit_right(g, mix(pop, nash.col))) / 2;

      LearnConfig il;
      il.budget_steps = 200000;
      il.seed = seed;
      const IndependentResult ippo = independent_learn(cfg, il, il, init.get(), init.get());
      r.ippo_sym = (exploit_left(g, Opponent::single(std::make_shared<TabularPolicy>(ippo.left))) +
                    exploit_right(g, Opponent::single(std::make_shared<TabularPolicy>(ippo.right)))) /
                   2;
      il.step_ratio = Rational(1, 10);
      const auto [fast, slow] = two_timescale(il);
      const IndependentResult tts = independent_learn(cfg, fast, slow, init.get(), init.get());
      r.tts_sym = (exploit_left(g, Opponent::single(std::make_shared<TabularPolicy>(tts.left))) +
                   exploit_right(g, Opponent::single(std::make_shared<TabularPolicy>(tts.right)))) /
                  2;
    });
    return out;
  }();
  return runs;
}

Verdict psro_convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  // Rock-paper-scissors as a one-step game, starting from rock (left) and
  // paper (right).
  const MatrixGame rps = MatrixGame::rock_paper_scissors();
  const auto rock = std::make_shared<TabularPolicy>(TabularPolicy::point_mass(3, 0));
  const auto paper = std::make_shared<TabularPolicy>(TabularPolicy::point_mass(3, 1));
  const LoopResult r = population_loop(MetaSolver::kPsro, 4, rock, paper, exact_br_oracle(rps),
                                       exact_payoff(rps), 1);
  const Exact rps_exploit =
      exact_best_response(rps, mix(r.mu, r.rho_mu), Side::kRight).value;
  const bool rps_ok = rps_exploit <= Exact(1, 1000000000);

  int below_pre = 0, below_fsp = 0;
  std::string per_seed;
  for (const TinyRun& t : tiny_runs()) {
    below_pre += t.psro < t.pretrained;
    below_fsp += t.psro < t.fsp;
    per_seed += " (" + fmt(t.psro, 3) + "/" + fmt(t.fsp, 3) + "/" + fmt(t.pretrained, 3) + ")";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string detail = "rps exploitability after 4 iterations " + to_string(rps_exploit) +
                             "; tiny psro<pretrained " + std::to_string(below_pre) +
                             "/5, psro<fsp " + std::to_string(below_fsp) +
                             "/5; psro/fsp/pretrained per seed" + per_seed;
  return {rps_ok && below_pre == kSeeds && below_fsp >= 4 && secs < 900, detail};
}

Verdict robustness_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  int ordered = 0;
  double mean[5] = {0, 0, 0, 0, 0};
  for (const TinyRun& t : tiny_runs()) {
    const double robust = std::max(t.psro_sym, t.league_sym);
    const bool ok = robust < std::min(t.ippo_sym, t.tts_sym) &&
                    std::max(t.ippo_sym, t.tts_sym) < t.pretrained_sym;
    ordered += ok;
    mean[0] += t.psro_sym / kSeeds;
    mean[1] += t.league_sym / kSeeds;
    mean[2] += t.ippo_sym / kSeeds;
    mean[3] += t.tts_sym / kSeeds;
    mean[4] += t.pretrained_sym / kSeeds;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string detail = "ordered in " + std::to_string(ordered) +
                             "/5 seeds; mean exploit win rate psro " + fmt(mean[0]) +
                             " league " + fmt(mean[1]) + " ippo " + fmt(mean[2]) + " 2timescale " +
                             fmt(mean[3]) + " pretrained " + fmt(mean[4]);
  return {ordered >= 4 && secs < 1800, detail};
}

// ---------------------------------------------------------------------------
// Population growth

Verdict population_sizes() {
  const MatrixGame rps = MatrixGame::rock_paper_scissors();
  const auto rock = std::make_shared<TabularPolicy>(TabularPolicy::point_mass(3, 0));
  int checked = 0, bad = 0;
  for (MetaSolver solver : {MetaSolver::kFsp, MetaSolver::kPsro}) {
    for (int T = 1; T <= 10; ++T) {
      const LoopResult r =
          population_loop(solver, T, rock, rock, exact_br_oracle(rps), exact_payoff(rps), 3);
      for (int t = 1; t <= T; ++t) {
        ++checked;
        const std::size_t mu = r.rho_mu_history[t - 1].size(), nu = r.rho_nu_history[t - 1].size();
        const auto want_mu = static_cast<std::size_t>(1 + (t + 1) / 2);
        const auto want_nu = static_cast<std::size_t>(1 + t / 2);
        bad += mu != want_mu || nu != want_nu ||
               r.payoff_history[t - 1].num_rows() != want_mu ||
               r.payoff_history[t - 1].num_cols() != want_nu;
      }
      bad += r.mu.size() != static_cast<std::size_t>(1 + (T + 1) / 2) ||
             r.nu.size() != static_cast<std::size_t>(1 + T / 2);
    }
  }
  return {bad == 0, std::to_string(checked) + " (solver, T, t) triples for T<=10, " +
                        std::to_string(bad) + " mismatches"};
}

// ---------------------------------------------------------------------------
// Elo

PolicyPtr always(const EngineConfig& cfg, const TransAction& a) {
  const auto acts = cfg.legal_actions();
  const int i = static_cast<int>(std::find(acts.begin(), acts.end(), a) - acts.begin());
  if (i == static_cast<int>(acts.size())) throw Error("action not legal");
  return std::make_shared<TabularPolicy>(
      TabularPolicy::point_mass(static_cast<int>(acts.size()), i));
}

Verdict elo_suite() {
  // Reference expected score in long double.
  const long double ref = 1.0L / (1.0L + std::pow(10.0L, -0.5L));
  const double got = elo_expected(1200, 1000);
  const bool formula = std::fabs(static_cast<long double>(got) - ref) < 1e-12L;

  const EngineConfig cfg = tiny_config();
  Population five;
  for (int level : {2, 4, 6, 8}) {
    five.add({"CPU", Side::kLeft, level}, std::make_shared<ScriptedCPU>(level, cfg));
  }
  Rng rng(11);
  five.add({"RAND", Side::kLeft, 0}, random_table(cfg, rng));
  const RatingTable t = run_tournament(five, 50, kDefaultEloK, cfg, 9, g_workers);
  double drift = std::fabs(t.sum() - 5 * kInitialElo);
  double running = 5 * kInitialElo;
  for (const EloRecord& r : t.history()) {
    running += (r.a_after - r.a_before) + (r.b_after - r.b_before);
    drift = std::max(drift, std::fabs(running - 5 * kInitialElo));
  }
  const bool conserved = t.history().size() == 1000 && drift <= 1e-9;

  EngineConfig dcfg = tiny_config();
  dcfg.action_set.clear();
  const BrawlGame g(dcfg);
  Population abc;
  abc.add({"A", Side::kLeft, 0}, always(dcfg, TransAction::attack(Attack::kHardPunch)));
  abc.add({"B", Side::kLeft, 0}, always(dcfg, TransAction::attack(Attack::kLightPunch)));
  abc.add({"C", Side::kLeft, 0}, always(dcfg, TransAction::motion(Motion::kForward)));
  bool transitive = true;
  for (auto [x, y] : {std::pair{0, 1}, {1, 2}, {0, 2}}) {
    transitive = transitive && evaluate_pair(g, *abc.policies[x], *abc.policies[y]) == 1 &&
                 evaluate_pair(g, *abc.policies[y], *abc.policies[x]) == -1;
  }
  const RatingTable d = run_tournament(abc, 50, kDefaultEloK, dcfg, 4, g_workers);
  const double ea = d.rating(abc.ids[0]), eb = d.rating(abc.ids[1]), ec = d.rating(abc.ids[2]);
  const bool dominance = transitive && ea > eb && eb > ec;

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15f", got);
  std::ostringstream detail;
  detail << "E(1200,1000)=" << buf << "; " << t.history().size()
         << " matches, max sum drift " << drift << "; A>B>C " << fmt(ea, 1) << " " << fmt(eb, 1)
         << " " << fmt(ec, 1);
  return {formula && conserved && dominance, detail.str()};
}

// ---------------------------------------------------------------------------
// Curriculum

Verdict curriculum() {
  const auto t0 = std::chrono::steady_clock::now();
  const EngineConfig cfg = small_config();
  const std::vector<int> levels = {1, 2, 3, 4, 5, 6, 7, 8};
  LearnConfig lc;
  lc.budget_steps = 200000;
  lc.seed = 1;
  const CurriculumResult r = full_game_train(cfg, levels, lc, CurriculumOptions{}, g_workers);
  const double lowest = *std::min_element(r.final_win_rates.begin(), r.final_win_rates.end());
  int aligned = 0;
  const std::size_t L = levels.size();
  for (std::size_t e = 0; e < r.schedules.size(); ++e) {
    double min_rate = 2, rate_at_max = -1;
    Exact max_weight = -1;
    for (std::size_t i = 0; i < L; ++i) {
      const CurvePoint& p = r.curves[e * L + i];
      min_rate = std::min(min_rate, p.win_rate);
      if (r.schedules[e][i] > max_weight) {
        max_weight = r.schedules[e][i];
        rate_at_max = p.win_rate;
      }
    }
    aligned += rate_at_max == min_rate;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int epochs = static_cast<int>(r.schedules.size());
  const std::string detail = "min final win rate over levels 1-8 " + fmt(lowest, 4) + "; " +
                             std::to_string(aligned) + "/" + std::to_string(epochs) +
                             " epochs weight the weakest level most; " + fmt(secs, 1) + "s";
  return {lowest >= 0.9 && aligned == epochs && secs < 1200, detail};
}

// ---------------------------------------------------------------------------
// Engine invariants

Verdict engine_invariants() {
  EngineConfig cfg;
  cfg.hard_coded_specials = true;
  cfg.reward_lambda = 1;
  cfg.bonus_scale = 0;
  const auto actions = cfg.legal_actions();
  constexpr std::size_t kEpisodes = 100000;
  constexpr std::size_t kChunk = 1000;
  std::vector<std::string> first_failure(kEpisodes / kChunk);
  std::vector<std::int64_t> steps(kEpisodes / kChunk, 0);
  parallel_for(kEpisodes / kChunk, g_workers, [&](std::size_t c) {
    std::vector<std::pair<TransAction, TransAction>> trace;
    for (std::size_t ep = c * kChunk; ep < (c + 1) * kChunk; ++ep) {
      Rng rng(derive_seed(99, ep));
      GameState s = reset(cfg);
      trace.clear();
      Rational sparse(0);
      std::string fail;
      while (!s.terminal && fail.empty()) {
        const TransAction a = actions[rng.below(actions.size())];
        const TransAction b = actions[rng.below(actions.size())];
        const StepResult r = step(s, a, b, cfg);
        ++steps[c];
        trace.emplace_back(a, b);
        if (auto bad = check_invariants(r.state, cfg)) fail = "invariant: " + *bad;
        if (r.state.fighters[0].hp > s.fighters[0].hp || r.state.fighters[1].hp > s.fighters[1].hp) {
          fail = "hp increased";
        }
        if (r.dense[0] + r.dense[1] != Rational(0)) fail = "dense not zero-sum";
        if (advance(mirror(s, cfg), b, a, cfg) != mirror(r.state, cfg)) fail = "mirror";
        sparse += r.sparse[0] + r.sparse[1];
        s = r.state;
      }
      if (fail.empty() && sparse != Rational(0)) fail = "sparse not zero-sum";
      if (fail.empty()) {
        GameState again = reset(cfg);
        for (const auto& [a, b] : trace) again = advance(again, a, b, cfg);
        if (state_digest(again) != state_digest(s) || again != s) fail = "replay digest";
      }
      if (!fail.empty()) {
        first_failure[c] = "episode " + std::to_string(ep) + ": " + fail;
        return;
      }
    }
  });
  std::int64_t total = 0;
  for (auto n : steps) total += n;
  for (const auto& f : first_failure) {
    if (!f.empty()) return {false, f};
  }
  return {true, std::to_string(kEpisodes) + " episodes, " + std::to_string(total) +
                    " steps: invariants, hp monotone, dense and sparse zero-sum, mirror, replay "
                    "digests"};
}

// ---------------------------------------------------------------------------
// League mechanics

Verdict league_mechanics() {
  const EngineConfig cfg = tiny_config();
  const BrawlGame g(cfg);
  std::vector<int> ok(kSeeds, 0);
  std::vector<std::string> book(kSeeds), rates(kSeeds);
  parallel_for(kSeeds, g_workers, [&](std::size_t i) {
    const std::uint64_t seed = i + 1;
    LearnConfig plc;
    plc.budget_steps = 30000;
    plc.seed = seed;
    const QLearner pre = pretrain(cfg, plc, {1, 2, 3, 4, 5, 6, 7, 8});
    LearnConfig lc;
    lc.budget_steps = 20000;
    lc.seed = seed;
    const LeagueResult r = run_league(cfg, 3, lc, pre, exact_payoff(g), seed);
    const Population pop = r.roster.population();
    bool counts = pop.size() == 2 + 8 * 3 && r.payoff.num_rows() == pop.size() &&
                  r.payoff.num_cols() == pop.size() && r.payoff.unknown_count() == 0 &&
                  r.payoff.rows() == pop.ids && r.payoff.cols() == pop.ids &&
                  r.roster.creation_order.size() == 8 * 3;
    std::set<std::string> names;
    for (const auto& id : pop.ids) names.insert(id.name());
    counts = counts && names.size() == pop.size();
    for (const auto& side : r.roster.agents) {
      for (const LeagueAgent& a : side) {
        counts = counts && a.checkpoints.size() == 3 && a.snapshots.size() == 3 &&
                 a.steps == 3 * lc.budget_steps;
      }
    }
    book[i] = counts ? "ok" : "bad";
    double worst = 1;
    for (Side s : {Side::kLeft, Side::kRight}) {
      const PolicyPtr init = r.roster.init_policies[index(other(s))];
      double best = 0;
      for (const PolicyPtr& snap : r.roster.agent(s, LeagueRole::kME).snapshots) {
        const Exact v = s == Side::kLeft ? evaluate_pair(g, *snap, *init)
                                         : Exact(-evaluate_pair(g, *init, *snap));
        best = std::max(best, Exact((1 + v) / 2).get_d());
      }
      worst = std::min(worst, best);
    }
    rates[i] = fmt(worst, 3);
    ok[i] = counts && worst >= 0.7;
  });
  int passed = 0, bookkeeping = 0;
  std::string per;
  for (int i = 0; i < kSeeds; ++i) {
    passed += ok[i];
    bookkeeping += book[i] == "ok";
    per += " " + rates[i];
  }
  return {bookkeeping == kSeeds && passed >= 4,
          "bookkeeping exact in " + std::to_string(bookkeeping) +
              "/5 seeds (26 ids, 26x26 known payoffs, 3 checkpoints per agent); main exploiter "
              "win rate vs the initial policy (worse side) per seed" + per};
}

struct Criterion {
  std::string name;
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace arenaladder

int main(int argc, char** argv) {
  using namespace arenaladder;
  std::set<std::string> only;
  bool strict = false;
  std::string report_path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--strict") {
      strict = true;
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream in(argv[++i]);
      for (std::string s; std::getline(in, s, ',');) only.insert(s);
    } else if (a == "--report" && i + 1 < argc) {
      report_path = argv[++i];
    } else if (a == "--workers" && i + 1 < argc) {
      g_workers = std::max(1, std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--only name,...] [--strict] [--workers N] [--report FILE]\n";
      return 2;
    }
  }
  const std::vector<Criterion> criteria = {
      {"nash_exactness", nash_exactness},
      {"exact_br_equivalence", exact_br_oracle_equivalence},
      {"psro_convergence", psro_convergence},
      {"robustness_ordering", robustness_ordering},
      {"population_sizes", population_sizes},
      {"elo_suite", elo_suite},
      {"curriculum", curriculum},
      {"engine_invariants", engine_invariants},
      {"league_mechanics", league_mechanics},
  };
  std::ostringstream report;
  int ran = 0, passed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.contains(c.name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++ran;
    passed += v.pass;
    std::ostringstream line;
    line << (v.pass ? "PASS " : "FAIL ") << c.name << " [" << fmt(secs, 1) << "s] " << v.detail;
    std::cout << line.str() << std::endl;
    report << line.str() << "\n";
  }
  std::cout << passed << "/" << ran << " criteria passed" << std::endl;
  report << passed << "/" << ran << " criteria passed\n";
  if (!report_path.empty()) std::ofstream(report_path) << report.str();
  return strict && passed != ran ? 1 : 0;
}
