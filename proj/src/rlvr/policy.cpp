// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/rlvr/policy.hpp"

#include <string>

#include "vrlvr/error.hpp"
#include "vrlvr/parallel.hpp"
#include "vrlvr/render.hpp"
#include "vrlvr/rlvr/grpo.hpp"

namespace vrlvr::rlvr {

const char* reward_mode_name(RewardMode m) { return m == RewardMode::Dense ? "dense" : "sparse"; }

RewardMode reward_mode_from_name(const std::string& name) {
  if (name == "dense") return RewardMode::Dense;
  if (name == "sparse") return RewardMode::Sparse;
  throw Error(ErrorCode::InvalidArgument, "reward mode must be dense or sparse, got '" + name + "'");
}

std::vector<double> encode_condition(const TaskInstance& inst, int cond_dim) {
  const Bounds b = inst.grid();
  std::vector<double> cells(static_cast<std::size_t>(b.area()), 0.0);
  switch (inst.task) {
    case Task::Maze: {
      const MazeBoard& m = inst.maze();
      for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = m.walls[i] ? 1.0 : 0.0;
      cells[b.index(m.start_pixel())] = -1.0;
      cells[b.index(m.goal_pixel())] = -0.5;
      break;
    }
    case Task::FlowFree: {
      const FlowBoard& f = inst.flow();
      const double k = f.num_colors();
      for (int c = 0; c < f.num_colors(); ++c) {
        cells[b.index(f.endpoints[c].first)] = (c + 1) / k;
        cells[b.index(f.endpoints[c].second)] = (c + 1) / k;
      }
      break;
    }
    case Task::Sokoban: {
      const SokobanLevel& s = inst.sokoban();
      for (int i = 0; i < b.area(); ++i) {
        const Cell c = b.cell(i);
        if (!s.is_floor(c)) cells[i] = 1.0;
        else if (s.is_target(c)) cells[i] = 0.5;
      }
      for (Cell box : s.boxes) cells[b.index(box)] += 0.25;
      cells[b.index(s.player)] = -1.0;
      break;
    }
  }
  cells.resize(static_cast<std::size_t>(cond_dim), 0.0);
  return cells;
}

LatentCondition make_condition(const TaskInstance& inst, int cond_dim, int slots) {
  if (slots < 1) throw Error(ErrorCode::InvalidArgument, "slot count must be positive");
  return {&inst, encode_condition(inst, cond_dim), slots};
}

std::vector<double> target_latent(const TaskInstance& inst, int slots) {
  if (static_cast<int>(inst.gt_actions.size()) > slots) {
    throw Error(ErrorCode::InvalidArgument, inst.id + " needs " + std::to_string(inst.gt_actions.size()) +
                                                " actions but the latent holds " + std::to_string(slots));
  }
  std::vector<double> z(static_cast<std::size_t>(slots) * 4, 0.0);
  for (std::size_t f = 0; f < inst.gt_actions.size(); ++f)
    z[f * 4 + static_cast<std::size_t>(inst.gt_actions[f])] = 1.0;
  return z;
}

std::vector<Action> decode_latent(std::span<const double> z, const TaskInstance& inst) {
  std::vector<Action> out;
  Playback play(inst);
  for (std::size_t f = 0; f + 4 <= z.size(); f += 4) {
    int best = 0;
    for (int a = 1; a < 4; ++a)
      if (z[f + a] > z[f + best]) best = a;
    const Action act = kAllActions[best];
    out.push_back(act);
    play.apply(act);
    if (play.goal_reached()) break;
  }
  return out;
}

double score_latent(std::span<const double> z, const TaskInstance& inst, RewardMode mode,
                    std::vector<Action>* actions, RewardBreakdown* breakdown) {
  const std::vector<Action> acts = decode_latent(z, inst);
  const FrameSequence seq = render_actions(inst, acts, inst.cell_px);
  RewardBreakdown r = dispatch_reward(seq, inst);
  const double value = mode == RewardMode::Dense ? r.combined : (r.success ? 1.0 : 0.0);
  if (actions) *actions = acts;
  if (breakdown) *breakdown = std::move(r);
  return value;
}

RolloutRecord sample_trajectory(const ToyVelocityModel& model, const LatentCondition& cond,
                                const DenoiseSchedule& schedule, SeededRng& rng) {
  const int D = cond.latent_dim();
  RolloutRecord rec;
  std::vector<double> x(D);
  for (double& v : x) v = rng.normal();
  rec.states.push_back(x);
  std::vector<double> noise(D, 0.0);
  for (int k = 0; k < schedule.steps; ++k) {
    const std::vector<double> v = model.forward(x, schedule.times[k], cond.embedding);
    rec.old_means.push_back(ode_mean(x, schedule.dt(k), v));
    if (schedule.stochastic(k)) {
      for (double& e : noise) e = rng.normal();
      x = sde_step(x, schedule.dt(k), v, schedule.sigmas[k], noise);
    } else {
      x = rec.old_means.back();
    }
    rec.states.push_back(x);
  }
  return rec;
}

std::vector<RolloutRecord> rollout_group(const ToyVelocityModel& model, const LatentCondition& cond,
                                         const DenoiseSchedule& schedule, int group_size,
                                         std::uint64_t seed, RewardMode mode, int group_id, int jobs) {
  if (group_size < 2) {
    throw Error(ErrorCode::GroupTooSmall, "group size must be >= 2, got " + std::to_string(group_size));
  }
  if (cond.latent_dim() != model.shape().latent_dim) {
    throw Error(ErrorCode::InvalidArgument, "condition latent size does not match the model");
  }
  const SeededRng root(seed);
  std::vector<RolloutRecord> out(static_cast<std::size_t>(group_size));
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    SeededRng rng = root.child(static_cast<std::uint64_t>(i));
    RolloutRecord rec = sample_trajectory(model, cond, schedule, rng);
    rec.reward = score_latent(rec.states.back(), *cond.instance, mode, &rec.actions, &rec.breakdown);
    rec.group = group_id;
    out[i] = std::move(rec);
  });
  return out;
}

}  // namespace vrlvr::rlvr
