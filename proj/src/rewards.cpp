// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/rewards.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "vrlvr/error.hpp"

namespace vrlvr {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void require_frames(const FrameSequence& seq) {
  if (seq.empty()) throw Error(ErrorCode::UnparsableFrame, "empty frame sequence");
}

// Flood fill over cells where `member` holds; returns a component id per
// cell (-1 outside) and the number of components.
template <typename Pred>
int label_components(Bounds b, Pred member, std::vector<int>& comp) {
  comp.assign(b.area(), -1);
  int next = 0;
  std::deque<Cell> queue;
  for (int i = 0; i < b.area(); ++i) {
    if (comp[i] >= 0 || !member(i)) continue;
    comp[i] = next;
    queue.push_back(b.cell(i));
    while (!queue.empty()) {
      Cell c = queue.front();
      queue.pop_front();
      for (Action a : kAllActions) {
        Cell m = offset(c, a);
        if (!b.contains(m)) continue;
        const int mi = b.index(m);
        if (comp[mi] >= 0 || !member(mi)) continue;
        comp[mi] = next;
        queue.push_back(m);
      }
    }
    ++next;
  }
  return next;
}

}  // namespace

nlohmann::json breakdown_to_json(const RewardBreakdown& r) {
  nlohmann::json j;
  j["task"] = task_name(r.task);
  j["components"] = r.components;
  j["weights"] = r.weights;
  j["combined"] = r.combined;
  j["success"] = r.success;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

RewardBreakdown reward_maze(const FrameSequence& seq, const TaskInstance& inst) {
  require_frames(seq);
  const MazeBoard& board = inst.maze();
  const Bounds b = board.pixel_bounds();
  const MazeCanvas before = maze_canvas_from(parse_frame(seq.front(), inst));
  const MazeCanvas after = maze_canvas_from(parse_frame(seq.back(), inst));

  std::vector<std::uint8_t> painted(b.area(), 0);
  int total = 0;
  int on_wall = 0;
  for (int i = 0; i < b.area(); ++i) {
    painted[i] = after[i] && !before[i];
    if (!painted[i]) continue;
    ++total;
    if (board.walls[i]) ++on_wall;
  }

  const Cell start = board.start_pixel();
  const Cell goal = board.goal_pixel();
  std::vector<int> comp;
  label_components(
      b, [&](int i) { return painted[i] != 0 || i == b.index(start); }, comp);
  const int start_comp = comp[b.index(start)];

  const std::vector<int> to_goal = pixel_distances(board, goal);
  const int d0 = to_goal[b.index(start)];
  int closest = d0;
  for (int i = 0; i < b.area(); ++i) {
    if (comp[i] != start_comp || board.walls[i] || to_goal[i] < 0) continue;
    closest = std::min(closest, to_goal[i]);
  }

  RewardBreakdown r;
  r.task = Task::Maze;
  const double conn = d0 > 0 ? clamp01(1.0 - double(closest) / d0) : 1.0;
  const double wall = total > 0 ? clamp01(1.0 - double(on_wall) / total) : 1.0;
  r.components = {{"conn", conn}, {"wall", wall}};
  r.weights = {{"conn", 1.0}, {"wall", 1.0}};
  r.combined = conn * wall;
  r.success = comp[b.index(goal)] == start_comp && on_wall == 0;
  return r;
}

RewardBreakdown reward_flowfree(const FrameSequence& seq, const TaskInstance& inst,
                                const FlowWeights& weights) {
  require_frames(seq);
  const FlowBoard& board = inst.flow();
  const Bounds b = board.bounds();
  const int k = board.num_colors();
  const FlowCanvas canvas = flow_canvas_from(parse_frame(seq.back(), inst), k);

  int valid = 0;
  int preserved = 0;
  int single_region = 0;
  int filled = 0;
  std::vector<int> comp;
  for (int c = 0; c < k; ++c) {
    const int regions = label_components(b, [&](int i) { return canvas.color[i] == c; }, comp);
    const int ia = b.index(board.endpoints[c].first);
    const int ib = b.index(board.endpoints[c].second);
    preserved += (canvas.color[ia] == c) + (canvas.color[ib] == c);
    if (regions == 1) ++single_region;
    if (comp[ia] >= 0 && comp[ia] == comp[ib]) {
      ++valid;
      filled += static_cast<int>(std::count(comp.begin(), comp.end(), comp[ia]));
    }
  }

  RewardBreakdown r;
  r.task = Task::FlowFree;
  const double kk = k > 0 ? k : 1;
  r.components = {{"valid", valid / kk},
                  {"pres", k > 0 ? preserved / (2.0 * k) : 1.0},
                  {"conn", single_region / kk},
                  {"fill", double(filled) / b.area()}};
  r.weights = {{"valid", weights.valid}, {"pres", weights.pres}, {"conn", weights.conn},
               {"fill", weights.fill}};
  r.combined = clamp01(weights.valid * r.at("valid") + weights.pres * r.at("pres") +
                       weights.conn * r.at("conn") + weights.fill * r.at("fill"));
  r.success = valid == k && preserved == 2 * k && single_region == k && filled == b.area();
  return r;
}

RewardBreakdown reward_sokoban(const FrameSequence& seq, const TaskInstance& inst,
                               const SokobanWeights& weights) {
  require_frames(seq);
  const SokobanLevel& level = inst.sokoban();
  std::vector<ParsedGrid> grids;
  grids.reserve(seq.size());
  for (const Frame& f : seq.frames) grids.push_back(parse_frame(f, inst));
  std::vector<std::optional<SokobanState>> states;
  states.reserve(grids.size());
  for (const auto& g : grids) states.push_back(sokoban_state_from(g, level));

  int moves = 0;
  int legal = 0;
  for (std::size_t f = 1; f < grids.size(); ++f) {
    if (grids[f].labels == grids[f - 1].labels) continue;
    ++moves;
    if (!states[f - 1] || !states[f]) continue;
    for (Action a : kAllActions) {
      auto next = try_step(level, *states[f - 1], a);
      if (next && *next == *states[f]) {
        ++legal;
        break;
      }
    }
  }

  int covered = 0;
  for (const Cell& t : level.targets)
    if (grids.back().at(t) == Role::Box) ++covered;

  RewardBreakdown r;
  r.task = Task::Sokoban;
  const double state =
      level.targets.empty() ? 1.0 : double(covered) / static_cast<double>(level.targets.size());
  const double proc = moves > 0 ? double(legal) / moves : 0.0;
  r.components = {{"state", state}, {"proc", proc}};
  r.weights = {{"state", weights.state}, {"proc", weights.proc}};
  r.combined = clamp01(weights.state * state + weights.proc * proc);
  r.success = moves > 0 && legal == moves &&
              covered == static_cast<int>(level.targets.size());
  return r;
}

RewardBreakdown dispatch_reward(const FrameSequence& seq, const TaskInstance& inst,
                                const RewardWeights& weights) {
  switch (inst.task) {
    case Task::Maze: return reward_maze(seq, inst);
    case Task::FlowFree: return reward_flowfree(seq, inst, weights.flow);
    case Task::Sokoban: return reward_sokoban(seq, inst, weights.sokoban);
  }
  throw Error(ErrorCode::UnknownTask, "no reward for task tag " +
                                          std::to_string(static_cast<int>(inst.task)));
}

bool task_success(const FrameSequence& seq, const TaskInstance& inst, std::string* diagnostic) {
  try {
    return dispatch_reward(seq, inst).success;
  } catch (const Error& e) {
    if (diagnostic) *diagnostic = e.what();
    return false;
  }
}

bool success_maze(const FrameSequence& seq, const TaskInstance& inst) {
  return inst.task == Task::Maze && task_success(seq, inst);
}

bool success_flowfree(const FrameSequence& seq, const TaskInstance& inst) {
  return inst.task == Task::FlowFree && task_success(seq, inst);
}

bool success_sokoban(const FrameSequence& seq, const TaskInstance& inst) {
  return inst.task == Task::Sokoban && task_success(seq, inst);
}

double sparse_reward(const FrameSequence& seq, const TaskInstance& inst) {
  return task_success(seq, inst) ? 1.0 : 0.0;
}

}  // namespace vrlvr
