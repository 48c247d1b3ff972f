// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/instance.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "vrlvr/error.hpp"
#include "vrlvr/parallel.hpp"
#include "vrlvr/rng.hpp"

namespace vrlvr {

using nlohmann::json;

const char* task_name(Task task) {
  switch (task) {
    case Task::Maze: return "maze";
    case Task::FlowFree: return "flowfree";
    case Task::Sokoban: return "sokoban";
  }
  return "?";
}

Task task_from_name(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "maze") return Task::Maze;
  if (lower == "flowfree") return Task::FlowFree;
  if (lower == "sokoban") return Task::Sokoban;
  throw Error(ErrorCode::UnknownTask, "'" + name + "' is not one of maze, flowfree, sokoban");
}

Bounds TaskInstance::grid() const {
  switch (task) {
    case Task::Maze: return maze().pixel_bounds();
    case Task::FlowFree: return flow().bounds();
    case Task::Sokoban: return sokoban().bounds();
  }
  throw Error(ErrorCode::UnknownTask, "bad task tag");
}

TaskInstance make_maze_instance(const MazeBoard& board, std::uint64_t seed,
                                const std::string& theme_id, int cell_px) {
  TaskInstance inst;
  inst.task = Task::Maze;
  inst.board = board;
  MazeSolution sol = maze_solve(board);
  inst.gt_actions = sol.actions;
  inst.gt_logical_path = std::move(sol.logical_path);
  inst.gt_pixel_path = std::move(sol.pixel_path);
  inst.theme_id = theme_id;
  inst.seed = seed;
  inst.cell_px = cell_px;
  return inst;
}

TaskInstance make_flowfree_instance(const FlowBoard& board, std::uint64_t seed,
                                    const std::string& theme_id, int cell_px) {
  if (board.num_colors() > kFlowColorCount) {
    throw Error(ErrorCode::TooManyColors, "palette holds at most 8 flow colors");
  }
  TaskInstance inst;
  inst.task = Task::FlowFree;
  inst.board = board;
  inst.gt_actions = flow_actions(board);
  inst.theme_id = theme_id;
  inst.seed = seed;
  inst.cell_px = cell_px;
  return inst;
}

TaskInstance make_sokoban_instance(const SokobanInstance& generated, std::uint64_t seed,
                                   const std::string& theme_id, int cell_px) {
  TaskInstance inst;
  inst.task = Task::Sokoban;
  inst.board = generated.level;
  inst.gt_actions = generated.solution.actions;
  inst.gt_states = generated.solution.states;
  inst.theme_id = theme_id;
  inst.seed = seed;
  inst.cell_px = cell_px;
  return inst;
}

namespace {

constexpr int kGenerationRetries = 16;

TaskInstance generate_once(Task task, std::uint64_t seed, const SizeOptions& opts) {
  SeededRng rng = SeededRng(seed).child("instance/sizes");
  const auto themes = builtin_palettes();
  const std::string theme =
      opts.theme_id.value_or(themes[static_cast<std::size_t>(
                                        rng.uniform_int(0, static_cast<std::int64_t>(themes.size()) - 1))]
                                 .theme_id);
  switch (task) {
    case Task::Maze: {
      const int n = opts.maze_n.value_or(7 + 2 * static_cast<int>(rng.uniform_int(0, 7)));
      const auto algo =
          opts.carve.value_or(static_cast<CarveAlgorithm>(rng.uniform_int(0, 2)));
      return make_maze_instance(maze_generate(n, algo, seed), seed, theme, opts.cell_px);
    }
    case Task::FlowFree: {
      const int n = opts.flow_n.value_or(static_cast<int>(rng.uniform_int(5, 8)));
      FlowBoard board;
      if (opts.flow_colors) {
        board = split_into_flows(hamiltonian_path(n, seed), *opts.flow_colors, seed);
        board.n = n;
      } else {
        board = flowfree_generate(n, seed);
      }
      return make_flowfree_instance(board, seed, theme, opts.cell_px);
    }
    case Task::Sokoban: {
      const int g = opts.sokoban_size.value_or(static_cast<int>(rng.uniform_int(6, 10)));
      const int boxes = opts.sokoban_boxes.value_or(static_cast<int>(rng.uniform_int(1, 3)));
      return make_sokoban_instance(sokoban_generate(g, boxes, seed, opts.sokoban_state_cap), seed,
                                   theme, opts.cell_px);
    }
  }
  throw Error(ErrorCode::UnknownTask, "bad task tag");
}

}  // namespace

TaskInstance generate_instance(Task task, std::uint64_t seed, const SizeOptions& opts) {
  std::uint64_t attempt_seed = seed;
  for (int attempt = 0;; ++attempt) {
    try {
      return generate_once(task, attempt_seed, opts);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::GenerationExhausted || attempt + 1 >= kGenerationRetries) throw;
    }
    attempt_seed = SeededRng(seed).child("instance/retry").child(attempt + 1).next_u64();
  }
}

std::vector<TaskInstance> generate_instances(Task task, int count, std::uint64_t seed,
                                             const SizeOptions& opts, int jobs) {
  std::vector<TaskInstance> out(static_cast<std::size_t>(std::max(count, 0)));
  const SeededRng stream = SeededRng(seed).child(std::string(task_name(task)));
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    TaskInstance inst = generate_instance(task, stream.child(i).next_u64(), opts);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%06zu", task_name(task), i);
    inst.id = buf;
    out[i] = std::move(inst);
  });
  return out;
}

// ---- JSON -----------------------------------------------------------------

namespace {

json cell_json(Cell c) { return json::array({c.row, c.col}); }

Cell cell_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json cells_json(const std::vector<Cell>& cells) {
  json a = json::array();
  for (const Cell& c : cells) a.push_back(cell_json(c));
  return a;
}

std::vector<Cell> cells_from(const json& j) {
  std::vector<Cell> out;
  for (const auto& e : j) out.push_back(cell_from(e));
  return out;
}

json palette_json(const Palette& p) {
  json colors = json::object();
  for (int i = 0; i < kRoleCount; ++i) {
    const Rgb c = p.colors[i];
    colors[role_name(static_cast<Role>(i))] = json::array({c.r, c.g, c.b});
  }
  return {{"id", p.theme_id}, {"colors", colors}};
}

}  // namespace

json instance_to_json(const TaskInstance& inst) {
  json j;
  j["schema_version"] = kMetaSchemaVersion;
  j["id"] = inst.id;
  j["task"] = task_name(inst.task);
  j["seed"] = inst.seed;
  j["cell_px"] = inst.cell_px;
  j["theme"] = palette_json(inst.palette());
  j["gt_actions"] = actions_to_string(inst.gt_actions);
  switch (inst.task) {
    case Task::Maze: {
      const MazeBoard& b = inst.maze();
      j["board"] = {{"n", b.n},
                    {"walls", walls_to_bits(b)},
                    {"start", cell_json(b.start)},
                    {"goal", cell_json(b.goal)},
                    {"carve", carve_name(b.algorithm)},
                    {"seed", b.seed}};
      j["gt"] = {{"logical_path", cells_json(inst.gt_logical_path)},
                 {"pixel_path", cells_json(inst.gt_pixel_path)}};
      break;
    }
    case Task::FlowFree: {
      const FlowBoard& b = inst.flow();
      json endpoints = json::array();
      json segments = json::array();
      for (int i = 0; i < b.num_colors(); ++i) {
        endpoints.push_back(json::array({cell_json(b.endpoints[i].first), cell_json(b.endpoints[i].second)}));
        segments.push_back(cells_json(b.segments[i]));
      }
      j["board"] = {{"n", b.n}, {"num_colors", b.num_colors()}, {"endpoints", endpoints},
                    {"seed", b.seed}};
      j["gt"] = {{"segments", segments}};
      break;
    }
    case Task::Sokoban: {
      const SokobanLevel& l = inst.sokoban();
      j["board"] = {{"rows", l.rows}, {"cols", l.cols}, {"grid", level_to_string(l)},
                    {"seed", l.seed}};
      json states = json::array();
      for (const auto& s : inst.gt_states)
        states.push_back({{"player", cell_json(s.player)}, {"boxes", cells_json(s.boxes)}});
      j["gt"] = {{"states", states}};
      break;
    }
  }
  return j;
}

TaskInstance instance_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema_version") ||
      j.at("schema_version").get<int>() != kMetaSchemaVersion) {
    throw Error(ErrorCode::SchemaVersionMismatch,
                "expected meta schema_version " + std::to_string(kMetaSchemaVersion));
  }
  TaskInstance inst;
  inst.task = task_from_name(j.at("task").get<std::string>());
  inst.id = j.value("id", std::string{});
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.cell_px = j.at("cell_px").get<int>();
  inst.theme_id = j.at("theme").at("id").get<std::string>();
  palette_by_id(inst.theme_id);
  inst.gt_actions = actions_from_string(j.at("gt_actions").get<std::string>());
  const json& b = j.at("board");
  const json& gt = j.at("gt");
  switch (inst.task) {
    case Task::Maze: {
      MazeBoard board;
      board.n = b.at("n").get<int>();
      board.walls = walls_from_bits(b.at("walls").get<std::string>(), board.n);
      board.start = cell_from(b.at("start"));
      board.goal = cell_from(b.at("goal"));
      board.algorithm = carve_from_name(b.at("carve").get<std::string>());
      board.seed = b.at("seed").get<std::uint64_t>();
      inst.board = std::move(board);
      inst.gt_logical_path = cells_from(gt.at("logical_path"));
      inst.gt_pixel_path = cells_from(gt.at("pixel_path"));
      break;
    }
    case Task::FlowFree: {
      FlowBoard board;
      board.n = b.at("n").get<int>();
      board.seed = b.at("seed").get<std::uint64_t>();
      for (const auto& e : b.at("endpoints")) board.endpoints.emplace_back(cell_from(e.at(0)), cell_from(e.at(1)));
      for (const auto& s : gt.at("segments")) board.segments.push_back(cells_from(s));
      if (board.segments.size() != board.endpoints.size()) {
        throw Error(ErrorCode::InvalidArgument, "flowfree endpoints and segments disagree");
      }
      inst.board = std::move(board);
      break;
    }
    case Task::Sokoban: {
      SokobanLevel level = level_from_string(b.at("grid").get<std::string>());
      level.seed = b.at("seed").get<std::uint64_t>();
      inst.board = std::move(level);
      for (const auto& s : gt.at("states"))
        inst.gt_states.push_back({cell_from(s.at("player")), cells_from(s.at("boxes"))});
      break;
    }
  }
  return inst;
}

}  // namespace vrlvr
