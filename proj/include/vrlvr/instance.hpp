// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "vrlvr/flowfree.hpp"
#include "vrlvr/maze.hpp"
#include "vrlvr/palette.hpp"
#include "vrlvr/sokoban.hpp"

namespace vrlvr {

enum class Task : std::uint8_t { Maze, FlowFree, Sokoban };

const char* task_name(Task task);
/// Accepts "maze", "flowfree", "sokoban" (case-insensitive). Throws UnknownTask.
Task task_from_name(const std::string& name);

inline constexpr int kDefaultCellPx = 16;
inline constexpr int kMetaSchemaVersion = 1;

/// A generated puzzle with everything needed to render and verify it.
struct TaskInstance {
  std::string id;
  Task task = Task::Maze;
  std::variant<MazeBoard, FlowBoard, SokobanLevel> board;
  std::vector<Action> gt_actions;
  std::vector<Cell> gt_logical_path;   // maze only
  std::vector<Cell> gt_pixel_path;     // maze only
  std::vector<SokobanState> gt_states; // sokoban only; flowfree keeps segments on the board
  std::string theme_id = "classic";
  std::uint64_t seed = 0;
  int cell_px = kDefaultCellPx;

  const MazeBoard& maze() const { return std::get<MazeBoard>(board); }
  const FlowBoard& flow() const { return std::get<FlowBoard>(board); }
  const SokobanLevel& sokoban() const { return std::get<SokobanLevel>(board); }
  const Palette& palette() const { return palette_by_id(theme_id); }

  /// Rows and columns of the rendered cell lattice.
  Bounds grid() const;

  friend bool operator==(const TaskInstance&, const TaskInstance&) = default;
};

TaskInstance make_maze_instance(const MazeBoard& board, std::uint64_t seed,
                                const std::string& theme_id, int cell_px = kDefaultCellPx);
TaskInstance make_flowfree_instance(const FlowBoard& board, std::uint64_t seed,
                                    const std::string& theme_id, int cell_px = kDefaultCellPx);
TaskInstance make_sokoban_instance(const SokobanInstance& generated, std::uint64_t seed,
                                   const std::string& theme_id, int cell_px = kDefaultCellPx);

/// Size options; unset fields are sampled from the dataset ranges
/// (maze 7..21 odd, flowfree 5..8, sokoban 6..10 with 1..3 boxes).
struct SizeOptions {
  std::optional<int> maze_n;
  std::optional<CarveAlgorithm> carve;
  std::optional<int> flow_n;
  std::optional<int> flow_colors;
  std::optional<int> sokoban_size;
  std::optional<int> sokoban_boxes;
  std::optional<std::string> theme_id;
  int cell_px = kDefaultCellPx;
  int sokoban_state_cap = kSokobanDefaultStateCap;
};

/// Deterministic in (task, seed, options). Generator failures are retried on
/// derived seeds; GenerationExhausted escapes only if all of those fail.
TaskInstance generate_instance(Task task, std::uint64_t seed, const SizeOptions& opts = {});

/// `count` instances with ids "<task>_000000"... and per-index derived seeds.
std::vector<TaskInstance> generate_instances(Task task, int count, std::uint64_t seed,
                                             const SizeOptions& opts = {}, int jobs = 1);

nlohmann::json instance_to_json(const TaskInstance& inst);
/// Throws SchemaVersionMismatch on a missing or different schema_version and
/// UnknownTask on an unrecognized task tag.
TaskInstance instance_from_json(const nlohmann::json& j);

}  // namespace vrlvr
