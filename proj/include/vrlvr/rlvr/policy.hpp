// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vrlvr/instance.hpp"
#include "vrlvr/rewards.hpp"
#include "vrlvr/rng.hpp"
#include "vrlvr/rlvr/model.hpp"
#include "vrlvr/rlvr/schedule.hpp"

namespace vrlvr::rlvr {

inline constexpr int kDefaultSlots = 16;

enum class RewardMode { Dense, Sparse };
const char* reward_mode_name(RewardMode m);
RewardMode reward_mode_from_name(const std::string& name);  // InvalidArgument

/// Board features, one value per grid cell in row-major order, zero padded
/// or truncated to cond_dim.
///   maze:     wall 1, start -1, goal -0.5, floor 0
///   flowfree: endpoint of color c -> (c + 1) / k, else 0
///   sokoban:  wall 1, target 0.5, box 0.25 (+0.5 on target), player -1
std::vector<double> encode_condition(const TaskInstance& inst, int cond_dim);

struct LatentCondition {
  const TaskInstance* instance = nullptr;
  std::vector<double> embedding;
  int slots = kDefaultSlots;

  int latent_dim() const { return slots * 4; }
};

LatentCondition make_condition(const TaskInstance& inst, int cond_dim, int slots = kDefaultSlots);

/// One-hot slots for gt_actions; unused slots are zero. Throws
/// InvalidArgument when the instance needs more than `slots` actions.
std::vector<double> target_latent(const TaskInstance& inst, int slots = kDefaultSlots);

/// Argmax per slot of 4 logits (ties go to the earlier of U, D, L, R).
/// Stops after the action that completes the task.
std::vector<Action> decode_latent(std::span<const double> z, const TaskInstance& inst);

struct RolloutRecord {
  std::vector<std::vector<double>> states;    // x_{t_0} .. x_{t_K}
  std::vector<std::vector<double>> old_means; // mu_old for steps 0 .. K-1
  std::vector<Action> actions;
  RewardBreakdown breakdown;
  double reward = 0.0;
  int group = 0;
};

/// Decodes, renders at inst.cell_px and scores a final latent.
double score_latent(std::span<const double> z, const TaskInstance& inst, RewardMode mode,
                    std::vector<Action>* actions = nullptr, RewardBreakdown* breakdown = nullptr);

/// Samples one trajectory: x_{t_0} ~ N(0, I), SDE steps where sigma_k > 0,
/// ODE steps elsewhere. Noise comes from `rng` only.
RolloutRecord sample_trajectory(const ToyVelocityModel& model, const LatentCondition& cond,
                                const DenoiseSchedule& schedule, SeededRng& rng);

/// G trajectories; sample i draws from SeededRng(seed).child(i), so results
/// do not depend on `jobs`. Throws GroupTooSmall for G < 2.
std::vector<RolloutRecord> rollout_group(const ToyVelocityModel& model, const LatentCondition& cond,
                                         const DenoiseSchedule& schedule, int group_size,
                                         std::uint64_t seed, RewardMode mode, int group_id = 0,
                                         int jobs = 1);

}  // namespace vrlvr::rlvr
