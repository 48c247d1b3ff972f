// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vrlvr {

/// Row-major grid coordinate; (0,0) is the top-left cell.
struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Declaration order is the tie-break order used everywhere: U < D < L < R.
enum class Action : std::uint8_t { U = 0, D = 1, L = 2, R = 3 };

inline constexpr std::array<Action, 4> kAllActions = {Action::U, Action::D, Action::L,
                                                      Action::R};

struct Bounds {
  int rows = 0;
  int cols = 0;

  bool contains(Cell c) const {
    return c.row >= 0 && c.col >= 0 && c.row < rows && c.col < cols;
  }
  int index(Cell c) const { return c.row * cols + c.col; }
  Cell cell(int index) const { return {index / cols, index % cols}; }
  int area() const { return rows * cols; }
};

Cell offset(Cell c, Action a);

/// Moves one step. Throws OutOfBounds instead of clamping.
Cell apply_action(Cell cell, Action a, Bounds bounds);

/// Direction of a unit step from `from` to `to`, if they are 4-adjacent.
std::optional<Action> step_direction(Cell from, Cell to);

bool adjacent(Cell a, Cell b);

/// Throws NonAdjacentCells if any consecutive pair is not 4-adjacent.
std::vector<Action> derive_actions(std::span<const Cell> path);

/// Unchecked walk: start, then each action applied in turn.
std::vector<Cell> replay(Cell start, std::span<const Action> actions);

char action_char(Action a);
Action action_from_char(char c);
std::string actions_to_string(std::span<const Action> actions);
std::vector<Action> actions_from_string(const std::string& s);

}  // namespace vrlvr
