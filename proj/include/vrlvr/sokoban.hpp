// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vrlvr/grid.hpp"

namespace vrlvr {

inline constexpr int kSokobanMaxMoves = 60;
inline constexpr int kSokobanDefaultStateCap = 200'000;
inline constexpr int kSokobanRegenerateBudget = 64;

/// Symbolic state (p, B). Boxes are kept sorted so equality is set equality.
struct SokobanState {
  Cell player;
  std::vector<Cell> boxes;

  bool has_box(Cell c) const;
  friend bool operator==(const SokobanState&, const SokobanState&) = default;
};

struct SokobanLevel {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> walls;  // rows*cols, 1 = wall; everything else is floor
  Cell player;
  std::vector<Cell> boxes;    // sorted
  std::vector<Cell> targets;  // sorted
  std::uint64_t seed = 0;

  Bounds bounds() const { return {rows, cols}; }
  bool is_floor(Cell c) const { return bounds().contains(c) && !walls[bounds().index(c)]; }
  bool is_target(Cell c) const;
  SokobanState initial_state() const { return {player, boxes}; }
  bool solved(const SokobanState& s) const { return s.boxes == targets; }

  friend bool operator==(const SokobanLevel&, const SokobanLevel&) = default;
};

struct SokobanSolution {
  std::vector<Action> actions;
  std::vector<SokobanState> states;  // actions.size() + 1 entries
};

/// Plain move into empty floor, or a push when the cell beyond the box is
/// empty floor. Anything else throws IllegalMove.
SokobanState sokoban_step(const SokobanLevel& level, const SokobanState& state, Action a);

/// Non-throwing variant of sokoban_step.
std::optional<SokobanState> try_step(const SokobanLevel& level, const SokobanState& state,
                                     Action a);

/// Move-optimal BFS over (p, B), expanding U, D, L, R. Returns nullopt when
/// the goal is not reached within `state_cap` expansions.
std::optional<SokobanSolution> sokoban_solve(const SokobanLevel& level,
                                             int state_cap = kSokobanDefaultStateCap);

/// A box off-target with a wall on one vertical and one horizontal side.
bool has_corner_deadlock(const SokobanLevel& level, const SokobanState& state);

struct SokobanInstance {
  SokobanLevel level;
  SokobanSolution solution;
};

/// Samples a connected floor region, player, boxes and targets, rejecting
/// corner deadlocks, unsolved levels and solutions longer than 60 moves.
/// Throws GenerationExhausted after kSokobanRegenerateBudget samples.
SokobanInstance sokoban_generate(int grid_size, int num_boxes, std::uint64_t seed,
                                 int state_cap = kSokobanDefaultStateCap);

/// Character grid: '#' wall, ' ' floor, '@' player, '$' box, '.' target,
/// '*' box on target, '+' player on target. Rows joined with '\n'.
std::string level_to_string(const SokobanLevel& level);
SokobanLevel level_from_string(const std::string& text);

}  // namespace vrlvr
