// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vrlvr/rlvr/policy.hpp"

namespace vrlvr::rlvr {

struct TrainConfig {
  int K = 20;
  int L = 10;
  int G = 16;
  double eta = 1.2;
  double clip_eps = 0.2;
  double beta = 0.04;
  double lr = 1.0;
  double momentum = 0.9;
  int iters = 300;
  RewardMode reward_mode = RewardMode::Dense;
  std::vector<Task> tasks{Task::Maze};
  std::uint64_t seed = 0;

  int hidden = 64;
  int slots = kDefaultSlots;
  int cond_dim = 64;
  int pool_size = 7;
  int updates_per_iter = 1;
  double grad_clip = 1.0;  // max gradient L2 norm, 0 disables
  int fit_steps = 120;
  double fit_lr = 0.05;
  int fit_batch = 16;
  int eval_samples = 16;
  int jobs = 1;

  DenoiseSchedule schedule() const { return make_schedule(K, L, eta, clip_eps, beta); }
  ModelShape shape() const { return {slots * 4, cond_dim, hidden}; }
};

nlohmann::json config_to_json(const TrainConfig& c);
/// Missing keys keep their defaults; unknown keys throw InvalidArgument.
TrainConfig config_from_json(const nlohmann::json& j);

// ---- supervised warm start ---------------------------------------------------

struct FitExample {
  std::vector<double> cond;
  std::vector<double> target;  // z*
};

struct FitOptions {
  int steps = 200;
  double lr = 0.05;
  double momentum = 0.9;
  int batch = 16;
  std::uint64_t seed = 0;
  int log_every = 10;
};

struct FitResult {
  // Loss on a fixed probe batch (fixed t and noise), recorded before the
  // first step and every log_every steps.
  std::vector<double> probe_losses;
};

std::vector<FitExample> fit_examples(std::span<const TaskInstance> instances, int cond_dim, int slots);

/// Flow-matching fit: x_t = (1 - t) z* + t eps, target eps - z*, loss
/// 1/D ||v - target||^2 averaged over the batch. Throws DivergedLoss on a
/// non-finite loss.
FitResult flow_matching_fit(ToyVelocityModel& model, std::span<const FitExample> data,
                            const FitOptions& opts);

double flow_matching_loss(const ToyVelocityModel& model, std::span<const FitExample> data,
                          int samples, std::uint64_t seed);

// ---- GRPO ----------------------------------------------------------------------

struct ObjectiveTerms {
  double total = 0.0;
  double policy = 0.0;
  double kl = 0.0;
  double clip_fraction = 0.0;
  std::vector<double> grad;  // empty unless requested
};

/// Clipped surrogate + beta * KL over every record and every step k < L,
/// with mu_new recomputed from the recorded x_{t_k} under `model`.
ObjectiveTerms grpo_objective(const ToyVelocityModel& model, const ToyVelocityModel& ref,
                              const LatentCondition& cond, const std::vector<RolloutRecord>& records,
                              std::span<const double> advantages, const DenoiseSchedule& schedule,
                              bool with_grad);

struct IterMetrics {
  int iter = 0;
  std::string instance_id;
  double mean_reward = 0.0;
  double reward_std = 0.0;
  double loss = 0.0;
  double kl = 0.0;
  double wall_ms = 0.0;
};

nlohmann::json metrics_to_json(const IterMetrics& m);

using MetricsSink = std::function<void(const IterMetrics&)>;

/// Cycles through `pool`, one rollout group and `updates_per_iter` gradient
/// steps per iteration. Throws DivergedLoss on a non-finite objective.
std::vector<IterMetrics> grpo_train(ToyVelocityModel& model, const ToyVelocityModel& ref,
                                    std::span<const TaskInstance> pool, const TrainConfig& cfg,
                                    const MetricsSink& sink = {});

/// Mean reward of `samples` trajectories per instance under the training
/// schedule, with noise fixed by `seed`.
double evaluate_policy(const ToyVelocityModel& model, std::span<const TaskInstance> pool,
                       const TrainConfig& cfg, int samples, std::uint64_t seed, RewardMode mode);

// ---- toy problems ----------------------------------------------------------------

/// 7x7 pixel mazes (3x3 logical cells), cell_px 8.
std::vector<TaskInstance> toy_maze_pool(int count, std::uint64_t seed);
/// 4x4 boards with 2 flows (14 actions).
std::vector<TaskInstance> toy_flowfree_pool(int count, std::uint64_t seed);
/// 6x6 one-box levels solvable within `max_moves`.
std::vector<TaskInstance> toy_sokoban_pool(int count, std::uint64_t seed, int max_moves = kDefaultSlots);
std::vector<TaskInstance> toy_pool(const TrainConfig& cfg);

struct ToyRunResult {
  double reward_before = 0.0;  // after the warm start, before GRPO
  double reward_after = 0.0;
  double success_before = 0.0;  // fraction of eval samples that solve the task
  double success_after = 0.0;
  std::vector<double> fit_losses;
  std::vector<IterMetrics> metrics;
  ToyVelocityModel model;
};

/// Pool -> flow-matching warm start (initial and reference policy) -> GRPO,
/// with dense-reward evaluation on fixed noise before and after.
ToyRunResult run_toy_training(const TrainConfig& cfg, const MetricsSink& sink = {});

}  // namespace vrlvr::rlvr
