// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/grid.hpp"

#include <cstdlib>

#include "vrlvr/error.hpp"

namespace vrlvr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonAdjacentCells: return "NonAdjacentCells";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::WallViolation: return "WallViolation";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::TooManyColors: return "TooManyColors";
    case ErrorCode::IllegalMove: return "IllegalMove";
    case ErrorCode::PadTooSmall: return "PadTooSmall";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::AmbiguousTransition: return "AmbiguousTransition";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::CorruptFrame: return "CorruptFrame";
    case ErrorCode::UnknownTask: return "UnknownTask";
    case ErrorCode::UnparsableFrame: return "UnparsableFrame";
    case ErrorCode::ZeroSigma: return "ZeroSigma";
    case ErrorCode::GroupTooSmall: return "GroupTooSmall";
    case ErrorCode::NonFiniteRatio: return "NonFiniteRatio";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::MismatchedManifest: return "MismatchedManifest";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Cell offset(Cell c, Action a) {
  switch (a) {
    case Action::U: return {c.row - 1, c.col};
    case Action::D: return {c.row + 1, c.col};
    case Action::L: return {c.row, c.col - 1};
    case Action::R: return {c.row, c.col + 1};
  }
  return c;
}

Cell apply_action(Cell cell, Action a, Bounds bounds) {
  Cell next = offset(cell, a);
  if (!bounds.contains(next)) {
    throw Error(ErrorCode::OutOfBounds, "move " + std::string(1, action_char(a)) +
                                            " leaves the " + std::to_string(bounds.rows) +
                                            "x" + std::to_string(bounds.cols) + " board");
  }
  return next;
}

bool adjacent(Cell a, Cell b) {
  return std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1;
}

std::optional<Action> step_direction(Cell from, Cell to) {
  if (!adjacent(from, to)) return std::nullopt;
  if (to.row < from.row) return Action::U;
  if (to.row > from.row) return Action::D;
  if (to.col < from.col) return Action::L;
  return Action::R;
}

std::vector<Action> derive_actions(std::span<const Cell> path) {
  std::vector<Action> actions;
  if (path.empty()) return actions;
  actions.reserve(path.size() - 1);
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto dir = step_direction(path[i - 1], path[i]);
    if (!dir) {
      throw Error(ErrorCode::NonAdjacentCells,
                  "path cells " + std::to_string(i - 1) + " and " + std::to_string(i) +
                      " are not 4-adjacent");
    }
    actions.push_back(*dir);
  }
  return actions;
}

std::vector<Cell> replay(Cell start, std::span<const Action> actions) {
  std::vector<Cell> path{start};
  path.reserve(actions.size() + 1);
  for (Action a : actions) path.push_back(offset(path.back(), a));
  return path;
}

char action_char(Action a) { return "UDLR"[static_cast<int>(a)]; }

Action action_from_char(char c) {
  switch (c) {
    case 'U': return Action::U;
    case 'D': return Action::D;
    case 'L': return Action::L;
    case 'R': return Action::R;
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, std::string("not an action: '") + c + "'");
}

std::string actions_to_string(std::span<const Action> actions) {
  std::string s;
  s.reserve(actions.size());
  for (Action a : actions) s.push_back(action_char(a));
  return s;
}

std::vector<Action> actions_from_string(const std::string& s) {
  std::vector<Action> out;
  out.reserve(s.size());
  for (char c : s) out.push_back(action_from_char(c));
  return out;
}

}  // namespace vrlvr
