// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "vrlvr/instance.hpp"
#include "vrlvr/render.hpp"

namespace vrlvr {

struct FlowWeights {
  double valid = 0.15;
  double pres = 0.35;
  double conn = 0.30;
  double fill = 0.20;
};

struct SokobanWeights {
  double state = 0.5;
  double proc = 0.5;
};

struct RewardWeights {
  FlowWeights flow;
  SokobanWeights sokoban;
};

/// Component scores in [0, 1], their weights and the combined scalar.
/// Maze combines multiplicatively (weights are reported as 1), the other
/// tasks as weighted sums.
struct RewardBreakdown {
  Task task = Task::Maze;
  std::map<std::string, double> components;
  std::map<std::string, double> weights;
  double combined = 0.0;
  bool success = false;
  std::string diagnostic;

  double at(const std::string& name) const { return components.at(name); }
};

nlohmann::json breakdown_to_json(const RewardBreakdown& r);

/// Routes on inst.task. Frame geometry problems throw GeometryMismatch; an
/// empty sequence throws UnparsableFrame.
RewardBreakdown dispatch_reward(const FrameSequence& seq, const TaskInstance& inst,
                                const RewardWeights& weights = {});

/// conn = 1 - d(closest reached pixel, goal) / d(start, goal) over painted
/// pixels 4-connected to the start (wall-respecting BFS distances);
/// wall = 1 - wall paintings / painted pixels; combined = conn * wall.
RewardBreakdown reward_maze(const FrameSequence& seq, const TaskInstance& inst);

/// valid: endpoint pairs joined by a monochromatic path; pres: endpoint
/// cells still showing their color; conn: colors forming exactly one region;
/// fill: grid cells on a valid color's endpoint-joining region.
RewardBreakdown reward_flowfree(const FrameSequence& seq, const TaskInstance& inst,
                                const FlowWeights& weights = {});

/// state: fraction of targets covered in the final frame; proc: valid
/// transitions over non-identity transitions (0 when every transition is an
/// identity).
RewardBreakdown reward_sokoban(const FrameSequence& seq, const TaskInstance& inst,
                               const SokobanWeights& weights = {});

bool success_maze(const FrameSequence& seq, const TaskInstance& inst);
bool success_flowfree(const FrameSequence& seq, const TaskInstance& inst);
bool success_sokoban(const FrameSequence& seq, const TaskInstance& inst);

/// Detector outcome with parsing errors mapped to false.
bool task_success(const FrameSequence& seq, const TaskInstance& inst, std::string* diagnostic = nullptr);

/// 1 iff the task's success detector passes.
double sparse_reward(const FrameSequence& seq, const TaskInstance& inst);

}  // namespace vrlvr
