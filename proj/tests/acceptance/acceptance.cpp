// SPDX-License-Identifier: Apache-2.0
// Acceptance runner: one PASS/FAIL line per criterion, exit 1 if any fail.
// Optional argv[1] runs only criteria whose name contains it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "../oracles.hpp"
#include "../rlvr_oracles.hpp"
#include "vrlvr/dataset.hpp"
#include "vrlvr/metrics.hpp"
#include "vrlvr/parallel.hpp"
#include "vrlvr/rewards.hpp"
#include "vrlvr/rlvr/grpo.hpp"
#include "vrlvr/rlvr/trainer.hpp"
#include "vrlvr/score.hpp"

using namespace vrlvr;
using namespace vrlvr::rlvr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---- round trip ------------------------------------------------------------------

Outcome round_trip() {
  int bad = 0, total = 0;
  std::string sizes;
  for (Task task : {Task::Maze, Task::FlowFree, Task::Sokoban}) {
    const std::vector<TaskInstance> insts = generate_instances(task, 1000, 2024);
    std::vector<char> ok(insts.size(), 0);
    parallel_for(insts.size(), jobs(), [&](std::size_t i) {
      const RewardBreakdown r = dispatch_reward(render_trajectory(insts[i]), insts[i]);
      ok[i] = r.success && r.combined == 1.0;
    });
    int lo = 1 << 20, hi = 0, blo = 99, bhi = 0;
    std::size_t moves = 0;
    for (const auto& inst : insts) {
      const int n = inst.grid().rows;
      lo = std::min(lo, n), hi = std::max(hi, n);
      if (task == Task::Sokoban) {
        const int b = static_cast<int>(inst.sokoban().boxes.size());
        blo = std::min(blo, b), bhi = std::max(bhi, b);
        moves = std::max(moves, inst.gt_actions.size());
      }
    }
    bad += static_cast<int>(std::count(ok.begin(), ok.end(), 0));
    total += static_cast<int>(insts.size());
    sizes += fmt(" %s n=%d..%d", task_name(task), lo, hi);
    if (task == Task::Sokoban) sizes += fmt(" boxes=%d..%d max_moves=%zu", blo, bhi, moves);
  }
  return {bad == 0, fmt("%d/%d succeed with reward 1;", total - bad, total) + sizes};
}

// ---- solver oracles ---------------------------------------------------------------

Outcome solver_oracles() {
  int maze_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 7 + 2 * (i % 8);
    const MazeBoard b = maze_generate(n, static_cast<CarveAlgorithm>(i % 3), 7000 + i);
    const MazeSolution s = maze_solve(b);
    const int expect = oracle::flood_distance(b.walls, n, b.start_pixel(), b.goal_pixel());
    maze_bad += static_cast<int>(s.pixel_path.size()) - 1 != expect;
  }
  int soko_bad = 0;
  for (int i = 0; i < 50; ++i) {
    const SokobanInstance inst = sokoban_generate(6, 1, 9000 + i);
    const int expect = oracle::SokoOracle(level_to_string(inst.level)).min_moves(kSokobanMaxMoves);
    soko_bad += static_cast<int>(inst.solution.actions.size()) != expect;
  }
  int ham_bad = 0;
  for (int i = 0; i < 500; ++i) {
    const int n = 5 + i % 4;
    ham_bad += !oracle::is_hamiltonian(hamiltonian_path(n, 11000 + i), n);
  }
  return {maze_bad == 0 && soko_bad == 0 && ham_bad == 0,
          fmt("maze %d/1000, sokoban %d/50, hamiltonian %d/500 agree", 1000 - maze_bad, 50 - soko_bad,
              500 - ham_bad)};
}

// ---- reward audit -------------------------------------------------------------------

Outcome reward_audit() {
  // maze: hook corridor with a dead-end spur; ten painted pixels, one a wall
  MazeBoard b;
  b.n = 7;
  b.walls.assign(49, 1);
  for (int c = 1; c <= 5; ++c) b.walls[1 * 7 + c] = 0;
  for (int r = 1; r <= 5; ++r) b.walls[r * 7 + 5] = 0;
  b.walls[3 * 7 + 4] = b.walls[3 * 7 + 3] = 0;
  b.start = {0, 0};
  b.goal = {2, 2};
  const TaskInstance maze = make_maze_instance(b, 0, "classic", 8);
  const RewardBreakdown rm = reward_maze(render_actions(maze, actions_from_string("RRDURRDDLRDD"), 8), maze);
  const double maze_hand = (1.0 - 0.0 / 8.0) * (1.0 - 1.0 / 10.0);

  // flowfree: unsolved board as the only frame
  double flow_err = 0;
  int flow_checked = 0;
  for (std::uint64_t s = 0; flow_checked < 20; ++s) {
    SizeOptions opts;
    opts.cell_px = 8;
    const TaskInstance inst = generate_instance(Task::FlowFree, s, opts);
    bool touching = false;
    for (const auto& [a, z] : inst.flow().endpoints) touching |= adjacent(a, z);
    if (touching) continue;
    ++flow_checked;
    FrameSequence still;
    still.frames = {render_trajectory(inst).front()};
    const double hand = 0.15 * 0.0 + 0.35 * 1.0 + 0.30 * 0.0 + 0.20 * 0.0;
    flow_err = std::max(flow_err, std::abs(reward_flowfree(still, inst).combined - hand));
  }

  // sokoban: one valid push, one jump, two valid moves; one of two boxes placed
  const SokobanLevel level = level_from_string("########\n#@$.   #\n#   $. #\n########");
  const TaskInstance soko = make_sokoban_instance({level, *sokoban_solve(level)}, 0, "classic", 8);
  auto frame = [&](Cell p, std::vector<Cell> boxes) {
    std::sort(boxes.begin(), boxes.end());
    return draw_sokoban(level, SokobanState{p, boxes}, soko.palette(), 8);
  };
  FrameSequence seq;
  seq.frames = {frame({1, 1}, {{1, 2}, {2, 4}}), frame({1, 2}, {{1, 3}, {2, 4}}), frame({2, 1}, {{1, 3}, {2, 4}}),
                frame({2, 2}, {{1, 3}, {2, 4}}), frame({2, 3}, {{1, 3}, {2, 4}})};
  const double soko_hand = 0.5 * (1.0 / 2.0) + 0.5 * (3.0 / 4.0);
  const double rs = reward_sokoban(seq, soko).combined;

  const double e1 = std::abs(rm.combined - maze_hand), e3 = std::abs(rs - soko_hand);
  const bool literal = std::abs(maze_hand - 0.9) < 1e-12 && std::abs(soko_hand - 0.625) < 1e-12;
  return {literal && e1 < 1e-9 && flow_err < 1e-9 && e3 < 1e-9,
          fmt("maze %.12f (err %.1e), flowfree 0.35 on %d boards (max err %.1e), sokoban %.12f (err %.1e)",
              rm.combined, e1, flow_checked, flow_err, rs, e3)};
}

// ---- GRPO math -----------------------------------------------------------------------

Outcome grpo_math() {
  const auto t0 = std::chrono::steady_clock::now();
  SeededRng rng(77);
  double id_err = 0;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> x(8), mu(8);
    for (double& v : x) v = rng.normal();
    for (double& v : mu) v = rng.normal();
    id_err = std::max(id_err, std::abs(std::exp(log_ratio(x, mu, mu, 0.1 + rng.uniform01())) - 1.0));
  }
  for (std::uint64_t s = 0; s < 5; ++s) {
    const rlo::SmallProblem p(100 + s);
    const ObjectiveTerms o = grpo_objective(p.model_old, p.ref, p.cond, p.records, p.advantages, p.schedule, false);
    double mean_a = 0;
    for (double a : p.advantages) mean_a += a / p.advantages.size();
    id_err = std::max(id_err, std::abs(o.policy + mean_a));
  }
  const double c1 = std::abs(clipped_surrogate(1.5, 1.0, 0.2) - (-1.2));
  const double c2 = std::abs(clipped_surrogate(0.5, -1.0, 0.2) - 0.8);
  const std::vector<double> m{0.5, -0.5}, shifted{0.6, -0.4};
  const double k1 = std::abs(kl_penalty(shifted, m, 1.0) - 0.005);

  double fd_worst = 0;
  for (int c = 0; c < 20; ++c) {
    const int steps = 3 + c % 4;
    const rlo::SmallProblem p(200 + c, steps, 1 + c % steps);
    auto f = [&](const ToyVelocityModel& mm) {
      return grpo_objective(mm, p.ref, p.cond, p.records, p.advantages, p.schedule, false).total;
    };
    const ObjectiveTerms o = grpo_objective(p.model, p.ref, p.cond, p.records, p.advantages, p.schedule, true);
    fd_worst = std::max(fd_worst, rlo::relative_error(o.grad, rlo::central_difference(p.model, f, 1e-4)));
  }

  // Shift invariance is exact; under scaling by a the 1e-8 guard moves each
  // advantage by |A| 1e-8 (1 - 1/a) / std, which is removed before comparing.
  double shift_err = 0, scale_raw = 0, scale_err = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r(16);
    for (double& v : r) v = rng.uniform01();
    const double a = 0.5 + 4 * rng.uniform01(), c = 10 * rng.normal();
    std::vector<double> sh = r, sc = r;
    for (double& v : sh) v += c;
    for (double& v : sc) v *= a;
    double mean = 0, var = 0;
    for (double v : r) mean += v / 16;
    for (double v : r) var += (v - mean) * (v - mean) / 16;
    const double sd = std::sqrt(var);
    const auto base = group_advantages(r), as = group_advantages(sh), ac = group_advantages(sc);
    for (int i = 0; i < 16; ++i) {
      shift_err = std::max(shift_err, std::abs(as[i] - base[i]));
      scale_raw = std::max(scale_raw, std::abs(ac[i] - base[i]));
      const double guard = base[i] * (sd + kAdvantageEps) / (sd + kAdvantageEps / a);
      scale_err = std::max(scale_err, std::abs(ac[i] - guard));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = id_err < 1e-12 && c1 < 1e-12 && c2 < 1e-12 && k1 < 1e-12 && fd_worst < 1e-4 &&
                    shift_err < 1e-9 && scale_err < 1e-9 && secs < 60;
  return {pass, fmt("identity %.1e, clip %.1e/%.1e, kl %.1e, fd worst rel %.2e over 20, shift %.1e, "
                    "scale %.1e (raw %.1e incl. guard), %.1fs",
                    id_err, c1, c2, k1, fd_worst, shift_err, scale_err, scale_raw, secs)};
}

// ---- early-step focus -----------------------------------------------------------------

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Outcome early_step_focus() {
  double eq_err = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const rlo::SmallProblem p(300 + s, 20, 20);
    const double full = grpo_objective(p.model, p.ref, p.cond, p.records, p.advantages, p.schedule, false).total;
    eq_err = std::max(eq_err, std::abs(full - rlo::reference_objective(p, 20)));
    DenoiseSchedule s10 = p.schedule;
    s10.early_cutoff = 10;
    const double esf = grpo_objective(p.model, p.ref, p.cond, p.records, p.advantages, s10, false).total;
    eq_err = std::max(eq_err, std::abs(esf - rlo::reference_objective(p, 10)));
  }

  TrainConfig cfg;
  cfg.iters = 15;
  const auto pool = toy_maze_pool(cfg.pool_size, 5);
  std::map<int, std::vector<double>> ms;
  for (int rep = 0; rep < 3; ++rep)
    for (int L : {10, 20}) {
      cfg.L = L;
      ToyVelocityModel model(cfg.shape(), 9);
      const ToyVelocityModel ref = model;
      for (const IterMetrics& m : grpo_train(model, ref, pool, cfg)) ms[L].push_back(m.wall_ms);
    }
  const double t10 = median(ms[10]), t20 = median(ms[20]);
  return {eq_err < 1e-12 && t10 < t20,
          fmt("objective vs direct sum %.1e; per-iteration median %.2f ms (L=10) vs %.2f ms (L=20), %.0f%% less",
              eq_err, t10, t20, 100 * (1 - t10 / t20))};
}

// ---- toy training -----------------------------------------------------------------------

Outcome toy_improvement() {
  const auto t0 = std::chrono::steady_clock::now();
  int good = 0;
  std::string per;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.jobs = jobs();
    const ToyRunResult r = run_toy_training(cfg);
    const double gain = r.reward_after - r.reward_before;
    double first = 0, last = 0;
    for (int i = 0; i < 20; ++i) {
      first += r.metrics[i].mean_reward / 20;
      last += r.metrics[r.metrics.size() - 1 - i].mean_reward / 20;
    }
    good += gain >= 0.2;
    per += fmt(" [%.3f->%.3f %+.3f, group curve %.3f->%.3f]", r.reward_before, r.reward_after, gain, first, last);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {good >= 4, fmt("%d/5 seeds gain >= 0.2;", good) + per + fmt(" %.0fs", secs)};
}

Outcome dense_vs_sparse() {
  bool ok = true;
  std::string per;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    std::map<RewardMode, ToyRunResult> runs;
    for (RewardMode mode : {RewardMode::Dense, RewardMode::Sparse}) {
      TrainConfig cfg;
      cfg.tasks = {Task::FlowFree};
      cfg.pool_size = 1;
      cfg.fit_steps = 30;
      cfg.reward_mode = mode;
      cfg.seed = seed;
      cfg.jobs = jobs();
      runs.emplace(mode, run_toy_training(cfg));
    }
    const ToyRunResult& d = runs.at(RewardMode::Dense);
    const ToyRunResult& s = runs.at(RewardMode::Sparse);
    const double dg = d.reward_after - d.reward_before, sg = s.reward_after - s.reward_before;
    ok = ok && d.success_before <= 0.05 && dg >= 0.1 && sg < 0.02;
    per += fmt(" [success0 %.2f, dense %+.3f, sparse %+.3f]", d.success_before, dg, sg);
  }
  return {ok, "flowfree 4x4/2 flows, 300 iters;" + per};
}

// ---- metrics ------------------------------------------------------------------------------

Outcome metric_self_consistency() {
  const auto dir = std::filesystem::temp_directory_path() / fmt("vrlvr_accept_%d", int(::getpid()));
  std::vector<DatasetEntry> entries;
  for (Task task : {Task::Maze, Task::FlowFree, Task::Sokoban}) {
    SizeOptions opts;
    opts.cell_px = 8;
    for (const auto& inst : generate_instances(task, 30, 31, opts)) entries.push_back({inst, render_trajectory(inst)});
  }
  write_dataset(entries, dir);
  const ScoreReport rep = score_datasets(dir, dir, jobs());
  std::filesystem::remove_all(dir);
  bool ok = rep.tasks.size() == 3;
  std::string per;
  for (const auto& t : rep.tasks) {
    ok = ok && t.precision == 100.0 && t.recall == 100.0 && t.f1 == 100.0 && t.success_rate == 100.0;
    per += fmt(" %s P/R/F1/SR %.1f/%.1f/%.1f/%.1f;", task_name(t.task), t.precision, t.recall, t.f1, t.success_rate);
  }
  const auto pred = actions_from_string("URR"), gt = actions_from_string("URD");
  const double f1 = f1_sokoban_action(pred, gt).f1;
  ok = ok && f1 == 2.0 / 3.0;
  return {ok, per + fmt(" [U,R,R] vs [U,R,D] F1 = %.17g", f1)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"round_trip", round_trip},
      {"solver_oracles", solver_oracles},
      {"reward_audit", reward_audit},
      {"grpo_math", grpo_math},
      {"early_step_focus", early_step_focus},
      {"toy_rlvr_improvement", toy_improvement},
      {"dense_vs_sparse", dense_vs_sparse},
      {"metric_self_consistency", metric_self_consistency},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && name.find(only) == std::string::npos) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
