// SPDX-License-Identifier: Apache-2.0
// vrlvr: gen / verify / score / train.
// Exit codes: 0 ok, 2 usage, 3 data error, 4 training divergence.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vrlvr/dataset.hpp"
#include "vrlvr/error.hpp"
#include "vrlvr/parallel.hpp"
#include "vrlvr/rewards.hpp"
#include "vrlvr/rlvr/trainer.hpp"
#include "vrlvr/score.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vrlvr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDiverged = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivergedLoss:
    case ErrorCode::NonFiniteRatio:
      return kExitDiverged;
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidSize:
    case ErrorCode::TooManyColors:
    case ErrorCode::PadTooSmall:
    case ErrorCode::UnknownTask:
    case ErrorCode::GroupTooSmall:
    case ErrorCode::ZeroSigma:
      return kExitUsage;
    default:
      return kExitData;
  }
}

struct Common {
  std::uint64_t seed = 0;
  int jobs = 1;
  bool pretty = false;
};

void emit(const json& j, const Common& c, std::ostream& out = std::cout) {
  out << (c.pretty ? j.dump(2) : j.dump()) << "\n";
}

void log_config(const std::string& cmd, const json& cfg) {
  std::cerr << json{{"command", cmd}, {"config", cfg}}.dump() << "\n";
}

std::vector<Task> parse_tasks(const std::string& name) {
  if (name == "all") return {Task::Maze, Task::FlowFree, Task::Sokoban};
  return {task_from_name(name)};
}

// ---- gen ---------------------------------------------------------------------------

struct GenArgs {
  std::string task;
  int count = 0;
  std::string out;
  std::optional<int> maze_n, flow_n, flow_colors, sokoban_size, sokoban_boxes, pad_to;
  std::optional<std::string> carve, theme;
  int cell_px = kDefaultCellPx;
};

int cmd_gen(const GenArgs& a, const Common& c) {
  SizeOptions opts;
  opts.maze_n = a.maze_n;
  if (a.carve) opts.carve = carve_from_name(*a.carve);
  opts.flow_n = a.flow_n;
  opts.flow_colors = a.flow_colors;
  opts.sokoban_size = a.sokoban_size;
  opts.sokoban_boxes = a.sokoban_boxes;
  opts.theme_id = a.theme;
  opts.cell_px = a.cell_px;
  if (a.count < 0) throw Error(ErrorCode::InvalidArgument, "count must be >= 0");
  const std::vector<Task> tasks = parse_tasks(a.task);

  json cfg = {{"task", a.task}, {"count", a.count}, {"out", a.out}, {"seed", c.seed}, {"jobs", c.jobs},
              {"cell_px", a.cell_px}};
  auto put = [&](const char* k, const auto& v) { cfg[k] = v ? json(*v) : json(nullptr); };
  put("maze_n", a.maze_n);
  put("carve", a.carve);
  put("flow_n", a.flow_n);
  put("flow_colors", a.flow_colors);
  put("sokoban_size", a.sokoban_size);
  put("sokoban_boxes", a.sokoban_boxes);
  put("theme", a.theme);
  put("pad_to", a.pad_to);
  log_config("gen", cfg);

  std::vector<DatasetEntry> entries;
  json written = json::object();
  for (Task task : tasks) {
    const std::vector<TaskInstance> insts = generate_instances(task, a.count, c.seed, opts, c.jobs);
    std::vector<DatasetEntry> batch(insts.size());
    std::vector<std::string> failures(insts.size());
    parallel_for(insts.size(), c.jobs, [&](std::size_t i) {
      batch[i].instance = insts[i];
      batch[i].frames = render_trajectory(insts[i], insts[i].cell_px, a.pad_to);
      const RewardBreakdown r = dispatch_reward(batch[i].frames, insts[i]);
      if (!r.success || r.combined != 1.0) failures[i] = insts[i].id + ": " + r.diagnostic;
    });
    for (const std::string& f : failures)
      if (!f.empty()) {
        std::cerr << "gen: ground truth failed verification: " << f << "\n";
        return kExitData;
      }
    written[task_name(task)] = insts.size();
    for (auto& e : batch) entries.push_back(std::move(e));
  }
  write_dataset(entries, a.out);
  emit({{"out", a.out}, {"written", written}, {"total", entries.size()}}, c);
  return kExitOk;
}

// ---- verify ------------------------------------------------------------------------

int cmd_verify(const std::string& dir, const Common& c) {
  log_config("verify", {{"data", dir}, {"jobs", c.jobs}});
  const std::vector<DatasetEntry> entries = read_dataset(dir);
  std::vector<RewardBreakdown> results(entries.size());
  parallel_for(entries.size(), c.jobs, [&](std::size_t i) {
    results[i] = dispatch_reward(entries[i].frames, entries[i].instance);
  });
  json rows = json::array();
  std::size_t ok = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const bool pass = results[i].success && results[i].combined == 1.0;
    ok += pass;
    json row = {{"id", entries[i].instance.id},
                {"task", task_name(entries[i].instance.task)},
                {"success", results[i].success},
                {"combined", results[i].combined}};
    if (!results[i].diagnostic.empty()) row["diagnostic"] = results[i].diagnostic;
    rows.push_back(row);
  }
  emit({{"instances", rows}, {"verified", ok}, {"total", entries.size()}}, c);
  return ok == entries.size() ? kExitOk : kExitData;
}

// ---- score -------------------------------------------------------------------------

int cmd_score(const std::string& pred, const std::string& ref, const std::string& out, bool table,
              const Common& c) {
  log_config("score", {{"pred", pred}, {"ref", ref}, {"out", out}, {"table", table}, {"jobs", c.jobs}});
  const ScoreReport report = score_datasets(pred, ref, c.jobs);
  const json j = report_to_json(report);
  if (!out.empty()) write_text_file(out, (c.pretty ? j.dump(2) : j.dump()) + "\n");
  if (table)
    std::cout << report_table(report);
  else
    emit(j, c);
  return kExitOk;
}

// ---- train -------------------------------------------------------------------------

json checkpoint_json(const rlvr::ToyVelocityModel& m, const rlvr::TrainConfig& cfg) {
  const rlvr::ModelShape s = m.shape();
  return {{"shape", {{"latent_dim", s.latent_dim}, {"cond_dim", s.cond_dim}, {"hidden", s.hidden}}},
          {"config", rlvr::config_to_json(cfg)},
          {"params", m.params()}};
}

int cmd_train(rlvr::TrainConfig cfg, const std::string& out_dir, const Common& c) {
  log_config("train", {{"out", out_dir}, {"train", rlvr::config_to_json(cfg)}});
  if (cfg.G < 2) throw Error(ErrorCode::GroupTooSmall, "group size must be >= 2, got " + std::to_string(cfg.G));
  (void)cfg.schedule();

  fs::create_directories(out_dir);
  write_text_file(fs::path(out_dir) / "config.json", rlvr::config_to_json(cfg).dump(2) + "\n");
  std::ofstream metrics(fs::path(out_dir) / "metrics.jsonl");
  if (!metrics) throw Error(ErrorCode::InvalidArgument, "cannot write to " + out_dir);
  const rlvr::ToyRunResult r = rlvr::run_toy_training(cfg, [&](const rlvr::IterMetrics& m) {
    metrics << rlvr::metrics_to_json(m).dump() << "\n";
    metrics.flush();
  });
  write_text_file(fs::path(out_dir) / "checkpoint.json", checkpoint_json(r.model, cfg).dump() + "\n");

  double wall = 0;
  for (const auto& m : r.metrics) wall += m.wall_ms;
  const json summary = {{"iters", r.metrics.size()},
                        {"reward_before", r.reward_before},
                        {"reward_after", r.reward_after},
                        {"success_before", r.success_before},
                        {"success_after", r.success_after},
                        {"fit_loss_first", r.fit_losses.empty() ? 0.0 : r.fit_losses.front()},
                        {"fit_loss_last", r.fit_losses.empty() ? 0.0 : r.fit_losses.back()},
                        {"mean_wall_ms", r.metrics.empty() ? 0.0 : wall / r.metrics.size()}};
  write_text_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
  emit(summary, c);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Puzzle video generation, verification, scoring and toy RLVR training"};
  app.require_subcommand(1);
  Common common;
  common.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Root seed");
    sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--pretty", common.pretty, "Indent JSON output");
  };

  GenArgs gen;
  CLI::App* g = app.add_subcommand("gen", "Generate instances with ground-truth renders");
  g->add_option("task", gen.task, "maze | flowfree | sokoban | all")->required();
  g->add_option("count", gen.count, "Instances per task")->required();
  g->add_option("-o,--out", gen.out, "Output dataset directory")->required();
  g->add_option("--maze-n", gen.maze_n, "Maze pixel size (odd, 7..21)");
  g->add_option("--carve", gen.carve, "dfs | prim | kruskal");
  g->add_option("--flow-n", gen.flow_n, "FlowFree board size (5..8)");
  g->add_option("--flow-colors", gen.flow_colors, "FlowFree color count");
  g->add_option("--sokoban-size", gen.sokoban_size, "Sokoban grid size (6..10)");
  g->add_option("--sokoban-boxes", gen.sokoban_boxes, "Sokoban box count (1..3)");
  g->add_option("--theme", gen.theme, "classic | dusk | mint | ember");
  g->add_option("--cell-px", gen.cell_px, "Pixels per grid cell")->check(CLI::PositiveNumber);
  g->add_option("--pad-to", gen.pad_to, "Pad each video to this many frames");
  add_common(g);

  std::string verify_dir;
  CLI::App* v = app.add_subcommand("verify", "Replay and verify every instance of a dataset");
  v->add_option("data", verify_dir, "Dataset directory")->required();
  add_common(v);

  std::string pred_dir, ref_dir, score_out;
  bool table = false;
  CLI::App* s = app.add_subcommand("score", "Score predicted videos against a reference dataset");
  s->add_option("pred", pred_dir, "Predicted dataset directory")->required();
  s->add_option("ref", ref_dir, "Reference dataset directory")->required();
  s->add_option("-o,--out", score_out, "Also write the JSON report here");
  s->add_flag("--table", table, "Print the per-task Prec/Rec/F1/SR table instead of JSON");
  add_common(s);

  rlvr::TrainConfig tc;
  std::string config_path, train_out = "runs/toy";
  std::vector<std::string> train_tasks;
  bool sparse = false;
  CLI::App* t = app.add_subcommand("train", "Flow-matching warm start followed by GRPO on a toy pool");
  t->add_option("--config", config_path, "JSON config; flags given on the command line win");
  t->add_option("-o,--out", train_out, "Run directory (metrics.jsonl, checkpoint.json, summary.json)");
  auto* o_tasks = t->add_option("--tasks", train_tasks, "maze,flowfree,sokoban")->delimiter(',');
  auto* o_iters = t->add_option("--iters", tc.iters, "GRPO iterations");
  auto* o_group = t->add_option("--group-size", tc.G, "Rollouts per group");
  auto* o_steps = t->add_option("--steps", tc.K, "Denoising steps K");
  auto* o_cutoff = t->add_option("--early-cutoff", tc.L, "Stochastic steps L");
  auto* o_beta = t->add_option("--beta", tc.beta, "KL coefficient");
  auto* o_eta = t->add_option("--eta", tc.eta, "Noise level");
  auto* o_clip = t->add_option("--clip", tc.clip_eps, "Ratio clip range");
  auto* o_lr = t->add_option("--lr", tc.lr, "GRPO learning rate");
  auto* o_updates = t->add_option("--updates-per-iter", tc.updates_per_iter, "Gradient steps per group");
  auto* o_pool = t->add_option("--pool-size", tc.pool_size, "Toy instances");
  auto* o_fit = t->add_option("--fit-steps", tc.fit_steps, "Flow-matching warm start steps");
  auto* o_sparse = t->add_flag("--sparse-reward", sparse, "Train on task success only");
  add_common(t);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen, common);
    if (*v) return cmd_verify(verify_dir, common);
    if (*s) return cmd_score(pred_dir, ref_dir, score_out, table, common);

    rlvr::TrainConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + config_path);
      cfg = rlvr::config_from_json(json::parse(in));
    }
    auto take = [](CLI::Option* opt, auto& dst, const auto& src) {
      if (opt->count()) dst = src;
    };
    take(o_iters, cfg.iters, tc.iters);
    take(o_group, cfg.G, tc.G);
    take(o_steps, cfg.K, tc.K);
    take(o_cutoff, cfg.L, tc.L);
    take(o_beta, cfg.beta, tc.beta);
    take(o_eta, cfg.eta, tc.eta);
    take(o_clip, cfg.clip_eps, tc.clip_eps);
    take(o_lr, cfg.lr, tc.lr);
    take(o_updates, cfg.updates_per_iter, tc.updates_per_iter);
    take(o_pool, cfg.pool_size, tc.pool_size);
    take(o_fit, cfg.fit_steps, tc.fit_steps);
    if (o_sparse->count()) cfg.reward_mode = rlvr::RewardMode::Sparse;
    if (o_tasks->count()) {
      cfg.tasks.clear();
      for (const auto& name : train_tasks) cfg.tasks.push_back(task_from_name(name));
    }
    if (t->get_option("--seed")->count() || config_path.empty()) cfg.seed = common.seed;
    if (t->get_option("--jobs")->count() || config_path.empty()) cfg.jobs = common.jobs;
    return cmd_train(cfg, train_out, common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
