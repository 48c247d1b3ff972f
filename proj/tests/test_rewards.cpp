// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "vrlvr/error.hpp"
#include "vrlvr/metrics.hpp"
#include "vrlvr/rewards.hpp"
#include "vrlvr/rng.hpp"

using namespace vrlvr;

namespace {

TaskInstance small(Task task, std::uint64_t seed) {
  SizeOptions opts;
  opts.cell_px = 8;
  return generate_instance(task, seed, opts);
}

// Hook board plus a dead-end spur at (3,4)/(3,3).
TaskInstance spur_maze() {
  MazeBoard b;
  b.n = 7;
  b.walls.assign(49, 1);
  for (int c = 1; c <= 5; ++c) b.walls[1 * 7 + c] = 0;
  for (int r = 1; r <= 5; ++r) b.walls[r * 7 + 5] = 0;
  b.walls[3 * 7 + 4] = 0;
  b.walls[3 * 7 + 3] = 0;
  b.start = {0, 0};
  b.goal = {2, 2};
  return make_maze_instance(b, 0, "classic", 8);
}

bool no_adjacent_endpoints(const FlowBoard& b) {
  for (const auto& [a, z] : b.endpoints)
    if (adjacent(a, z)) return false;
  return true;
}

}  // namespace

TEST_CASE("dispatch routes on task") {
  CHECK(dispatch_reward(render_trajectory(small(Task::Maze, 1)), small(Task::Maze, 1)).components.size() == 2);
  const auto soko = small(Task::Sokoban, 1);
  const RewardBreakdown r = dispatch_reward(render_trajectory(soko), soko);
  CHECK(r.components.count("state") == 1);
  CHECK(r.components.count("proc") == 1);
  CHECK_THROWS_AS(task_from_name("Chess"), Error);
  try {
    dispatch_reward(FrameSequence{}, soko);
    FAIL("expected UnparsableFrame");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnparsableFrame);
  }
}

TEST_CASE("maze reward worked examples") {
  const TaskInstance inst = spur_maze();
  const RewardBreakdown gt = reward_maze(render_trajectory(inst), inst);
  CHECK(gt.at("conn") == 1.0);
  CHECK(gt.at("wall") == 1.0);
  CHECK(gt.combined == 1.0);
  CHECK(gt.success);

  FrameSequence still;
  still.frames = {render_trajectory(inst).front()};
  CHECK(reward_maze(still, inst).combined == 0.0);
  CHECK(reward_maze(still, inst).at("conn") == 0.0);

  // Ten painted pixels: eight on the route, one spur cell, one wall (2,3).
  const auto acts = actions_from_string("RRDURRDDLRDD");
  const RewardBreakdown r = reward_maze(render_actions(inst, acts, 8), inst);
  const double hand_wall = 1.0 - 1.0 / 10.0;
  const double hand_conn = 1.0 - 0.0 / 8.0;
  CHECK(std::abs(r.at("wall") - hand_wall) < 1e-9);
  CHECK(std::abs(r.at("conn") - hand_conn) < 1e-9);
  CHECK(std::abs(r.combined - 0.9) < 1e-9);
  CHECK_FALSE(r.success);
  CHECK(sparse_reward(render_actions(inst, acts, 8), inst) == 0.0);

  // Stop after four route pixels: closest reached pixel is (1,5).
  const auto part = actions_from_string("RRRR");
  const RewardBreakdown p = reward_maze(render_actions(inst, part, 8), inst);
  const auto& w = inst.maze().walls;
  const double d0 = oracle::flood_distance(w, 7, {1, 1}, {5, 5});
  const double dc = oracle::flood_distance(w, 7, {1, 5}, {5, 5});
  CHECK(std::abs(p.at("conn") - (1.0 - dc / d0)) < 1e-9);
  CHECK(p.at("wall") == 1.0);
}

TEST_CASE("maze wall violations never raise the reward") {
  const TaskInstance inst = spur_maze();
  const double clean = reward_maze(render_actions(inst, actions_from_string("RRRRDDDD"), 8), inst).combined;
  const double dirty = reward_maze(render_actions(inst, actions_from_string("RRDURRDDDD"), 8), inst).combined;
  CHECK(dirty <= clean);
}

TEST_CASE("flowfree reward worked examples") {
  int checked = 0;
  for (std::uint64_t s = 0; checked < 5; ++s) {
    const TaskInstance inst = small(Task::FlowFree, s);
    // Touching endpoints are already joined on the unsolved board.
    if (!no_adjacent_endpoints(inst.flow())) continue;
    ++checked;
    const RewardBreakdown gt = reward_flowfree(render_trajectory(inst), inst);
    for (const auto& [name, value] : gt.components) CHECK(value == 1.0);
    CHECK(gt.combined == 1.0);

    FrameSequence still;
    still.frames = {render_trajectory(inst).front()};
    const RewardBreakdown r = reward_flowfree(still, inst);
    CHECK(r.at("pres") == 1.0);
    CHECK(r.at("valid") == 0.0);
    CHECK(r.at("conn") == 0.0);
    CHECK(r.at("fill") == 0.0);
    const double hand = 0.15 * 0.0 + 0.35 * 1.0 + 0.30 * 0.0 + 0.20 * 0.0;
    CHECK(std::abs(r.combined - hand) < 1e-9);
    CHECK(std::abs(r.combined - 0.35) < 1e-9);
  }
}

TEST_CASE("flowfree with one of two colors solved") {
  const std::vector<Cell> path = hamiltonian_path(4, 2);
  std::uint64_t split_seed = 0;
  while (!no_adjacent_endpoints(split_into_flows(path, 2, split_seed))) ++split_seed;
  const FlowBoard board = split_into_flows(path, 2, split_seed);
  const TaskInstance inst = make_flowfree_instance(board, 0, "mint", 8);
  const std::size_t first = board.segments[0].size();
  const std::vector<Action> all = flow_actions(board);
  const std::vector<Action> acts(all.begin(), all.begin() + static_cast<long>(first - 1));
  const RewardBreakdown r = reward_flowfree(render_actions(inst, acts, 8), inst);
  const double fill = double(first) / 16.0;
  CHECK(r.at("valid") == 0.5);
  CHECK(r.at("conn") == 0.5);
  CHECK(r.at("pres") == 1.0);
  CHECK(std::abs(r.at("fill") - fill) < 1e-12);
  CHECK(std::abs(r.combined - (0.15 * 0.5 + 0.35 + 0.30 * 0.5 + 0.20 * fill)) < 1e-9);
  CHECK_FALSE(r.success);
}

TEST_CASE("sokoban reward worked examples") {
  const SokobanLevel level = level_from_string("########\n#@$.   #\n#   $. #\n########");
  const auto solved = sokoban_solve(level);
  REQUIRE(solved);
  const TaskInstance inst = make_sokoban_instance({level, *solved}, 0, "classic", 8);
  CHECK(reward_sokoban(render_trajectory(inst), inst).combined == 1.0);

  const Palette& pal = inst.palette();
  auto frame = [&](Cell player, std::vector<Cell> boxes) {
    std::sort(boxes.begin(), boxes.end());
    return draw_sokoban(level, SokobanState{player, boxes}, pal, 8);
  };
  FrameSequence still;
  still.frames = {frame({1, 1}, {{1, 2}, {2, 4}}), frame({1, 1}, {{1, 2}, {2, 4}})};
  const RewardBreakdown s = reward_sokoban(still, inst);
  CHECK(s.at("state") == 0.0);
  CHECK(s.at("proc") == 0.0);
  CHECK(s.combined == 0.0);

  // push R (valid), jump (1,2)->(2,1) (invalid), R, R (valid).
  FrameSequence seq;
  seq.frames = {frame({1, 1}, {{1, 2}, {2, 4}}), frame({1, 2}, {{1, 3}, {2, 4}}), frame({2, 1}, {{1, 3}, {2, 4}}),
                frame({2, 2}, {{1, 3}, {2, 4}}), frame({2, 3}, {{1, 3}, {2, 4}})};
  const RewardBreakdown r = reward_sokoban(seq, inst);
  const double hand_proc = 3.0 / 4.0;
  const double hand_state = 1.0 / 2.0;
  CHECK(std::abs(r.at("proc") - hand_proc) < 1e-9);
  CHECK(std::abs(r.at("state") - hand_state) < 1e-9);
  CHECK(std::abs(r.combined - (0.5 * hand_state + 0.5 * hand_proc)) < 1e-9);
  CHECK(std::abs(r.combined - 0.625) < 1e-9);

  // Boxes land on targets but only through a jump: not a success.
  FrameSequence cheat;
  cheat.frames = {frame({1, 1}, {{1, 2}, {2, 4}}), frame({1, 2}, {{1, 3}, {2, 4}}), frame({2, 3}, {{1, 3}, {2, 4}}),
                  frame({2, 4}, {{1, 3}, {2, 5}})};
  CHECK_FALSE(success_sokoban(cheat, inst));
  CHECK(reward_sokoban(cheat, inst).at("state") == 1.0);
}

TEST_CASE("covering another target never lowers the sokoban reward") {
  const SokobanLevel level = level_from_string("########\n#@$.   #\n#   $. #\n########");
  const TaskInstance inst = make_sokoban_instance({level, *sokoban_solve(level)}, 0, "classic", 8);
  const auto one = actions_from_string("R");
  const auto two = actions_from_string("RDLDRRR");
  const double a = reward_sokoban(render_actions(inst, one, 8), inst).combined;
  const double b = reward_sokoban(render_actions(inst, two, 8), inst).combined;
  CHECK(b >= a);
}

TEST_CASE("ground truth succeeds with reward one") {
  for (Task task : {Task::Maze, Task::FlowFree, Task::Sokoban})
    for (std::uint64_t s = 0; s < 10; ++s) {
      const TaskInstance inst = small(task, 40 + s);
      const FrameSequence seq = render_trajectory(inst);
      const RewardBreakdown r = dispatch_reward(seq, inst);
      CHECK(r.success);
      CHECK(r.combined == 1.0);
      CHECK(task_success(seq, inst));
      CHECK(sparse_reward(seq, inst) == 1.0);
      FrameSequence still;
      still.frames = {seq.front()};
      CHECK(sparse_reward(still, inst) == 0.0);
    }
}

TEST_CASE("rewards stay in [0, 1] on arbitrary input") {
  SeededRng rng(17);
  for (int trial = 0; trial < 90; ++trial) {
    const Task task = static_cast<Task>(trial % 3);
    const TaskInstance inst = small(task, 1000 + trial);
    FrameSequence seq;
    if (trial % 2 == 0) {
      // Random walks through the renderer.
      std::vector<Action> acts;
      for (int i = rng.uniform_int(0, 40); i > 0; --i) acts.push_back(kAllActions[rng.uniform_int(0, 3)]);
      seq = render_actions(inst, acts, inst.cell_px);
    } else {
      // Random palette colors per cell, or raw noise.
      const Bounds g = inst.grid();
      const Palette& pal = inst.palette();
      for (int f = rng.uniform_int(1, 5); f > 0; --f) {
        Frame fr(g.cols * inst.cell_px, g.rows * inst.cell_px);
        const bool noise = rng.bernoulli(0.3);
        for (int r = 0; r < g.rows; ++r)
          for (int c = 0; c < g.cols; ++c) {
            const Rgb col = pal.colors[rng.uniform_int(0, kRoleCount - 1)];
            for (int y = 0; y < inst.cell_px; ++y)
              for (int x = 0; x < inst.cell_px; ++x) {
                std::uint8_t* p = fr.pixel(c * inst.cell_px + x, r * inst.cell_px + y);
                if (noise) {
                  p[0] = rng.uniform_int(0, 255), p[1] = rng.uniform_int(0, 255), p[2] = rng.uniform_int(0, 255);
                } else {
                  p[0] = col.r, p[1] = col.g, p[2] = col.b;
                }
              }
          }
        seq.frames.push_back(fr);
      }
    }
    const RewardBreakdown r = dispatch_reward(seq, inst);
    for (const auto& [name, value] : r.components) {
      CHECK(value >= 0.0);
      CHECK(value <= 1.0);
    }
    CHECK(r.combined >= 0.0);
    CHECK(r.combined <= 1.0);
    if (r.success) CHECK(r.combined == 1.0);
    const RewardBreakdown again = dispatch_reward(seq, inst);
    CHECK(again.combined == r.combined);
    CHECK(again.components == r.components);
  }
}

TEST_CASE("breakdown json") {
  const TaskInstance inst = small(Task::FlowFree, 3);
  const nlohmann::json j = breakdown_to_json(dispatch_reward(render_trajectory(inst), inst));
  CHECK(j.at("task") == "flowfree");
  CHECK(j.at("combined") == 1.0);
  CHECK(j.at("components").size() == 4);
  CHECK(j.at("weights").at("pres") == 0.35);
}
