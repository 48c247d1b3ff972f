// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vrlvr/instance.hpp"
#include "vrlvr/palette.hpp"

namespace vrlvr {

/// Row-major RGB raster.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Frame() = default;
  Frame(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t* pixel(int x, int y) { return &rgb[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* pixel(int x, int y) const {
    return &rgb[(static_cast<std::size_t>(y) * width + x) * 3];
  }

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Ordered frames; frame f -> f+1 is one logical action, optionally followed
/// by repeats of the final frame.
struct FrameSequence {
  std::vector<Frame> frames;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
  const Frame& front() const { return frames.front(); }
  const Frame& back() const { return frames.back(); }

  friend bool operator==(const FrameSequence&, const FrameSequence&) = default;
};

// ---- symbolic canvases -------------------------------------------------------

/// Painted pixels of a maze drawing (n*n, 1 = painted with the path color).
using MazeCanvas = std::vector<std::uint8_t>;

/// Per-cell flow color (-1 = empty) and whether the cell is drawn as a full
/// fill rather than an endpoint dot.
struct FlowCanvas {
  std::vector<int> color;
  std::vector<std::uint8_t> filled;

  static FlowCanvas initial(const FlowBoard& board);
  friend bool operator==(const FlowCanvas&, const FlowCanvas&) = default;
};

Frame draw_maze(const MazeBoard& board, const MazeCanvas& painted, const Palette& palette,
                int cell_px);
Frame draw_flow(const FlowBoard& board, const FlowCanvas& canvas, const Palette& palette,
                int cell_px);
Frame draw_sokoban(const SokobanLevel& level, const SokobanState& state, const Palette& palette,
                   int cell_px);

/// Renders the ground-truth trajectory: frame 0 is the unsolved board and
/// each following frame applies one gt action. With `pad_to`, the final frame
/// is repeated up to that many frames (PadTooSmall if shorter than the
/// logical count). Throws InvalidArgument for cell_px < 8.
FrameSequence render_trajectory(const TaskInstance& inst, int cell_px,
                                std::optional<int> pad_to = std::nullopt);
FrameSequence render_trajectory(const TaskInstance& inst);

/// Renders an arbitrary (e.g. model-produced) action sequence with the same
/// drawing rules. Moves that would leave the board, or illegal Sokoban
/// moves, produce an unchanged frame.
FrameSequence render_actions(const TaskInstance& inst, std::span<const Action> actions,
                             int cell_px);

/// Task playback shared by rendering and latent decoding. Tracks the head
/// position / state and reports whether the task-level goal has been reached.
class Playback {
 public:
  explicit Playback(const TaskInstance& inst);

  /// Applies one action; returns false when it had no effect.
  bool apply(Action a);
  bool goal_reached() const;
  Frame draw(const Palette& palette, int cell_px) const;

 private:
  const TaskInstance* inst_;
  Cell head_{};
  MazeCanvas maze_;
  FlowCanvas flow_;
  int segment_ = 0;
  SokobanState sokoban_;
};

// ---- parsing -----------------------------------------------------------------

inline constexpr double kParseTolerance = 60.0;

/// Per-cell palette classification; nullopt marks Unknown.
struct ParsedGrid {
  int rows = 0;
  int cols = 0;
  std::vector<std::optional<Role>> labels;
  // Mean over the band outside the inner square; only used to tell a flow
  // endpoint dot from a filled cell.
  std::vector<std::optional<Role>> rims;

  std::optional<Role> at(Cell c) const { return labels[static_cast<std::size_t>(c.row * cols + c.col)]; }
  friend bool operator==(const ParsedGrid&, const ParsedGrid&) = default;
};

/// Classifies the mean RGB over the central 50% of every cell to the nearest
/// palette role within kParseTolerance. Throws GeometryMismatch when the
/// frame size disagrees with the instance grid and cell_px.
ParsedGrid parse_frame(const Frame& frame, const TaskInstance& inst);

MazeCanvas maze_canvas_from(const ParsedGrid& grid);
FlowCanvas flow_canvas_from(const ParsedGrid& grid, int num_colors);
/// Symbolic (p, B) when the grid shows exactly one player, no unknown cells
/// on the level's floor, and as many boxes as targets.
std::optional<SokobanState> sokoban_state_from(const ParsedGrid& grid, const SokobanLevel& level);

enum class DecodeMode { Strict, Lenient };

/// Sokoban: player displacement per transition. Maze: direction of the newly
/// painted pixel from the current path head. Identity transitions are
/// skipped. Strict mode throws AmbiguousTransition on any transition no
/// single unit move explains; lenient mode skips it.
std::vector<Action> decode_actions(const FrameSequence& seq, const TaskInstance& inst,
                                   DecodeMode mode = DecodeMode::Strict);

}  // namespace vrlvr
