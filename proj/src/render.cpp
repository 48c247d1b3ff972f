// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/render.hpp"

#include <algorithm>
#include <string>

#include "vrlvr/error.hpp"

namespace vrlvr {

namespace {

// How one cell is drawn: a base fill plus an optional centered square whose
// margin is cell_px/8. The parser's central-50% window lies inside that
// square, so the inner role wins classification when present.
struct Appearance {
  Role base = Role::Background;
  std::optional<Role> inner;

  friend bool operator==(const Appearance&, const Appearance&) = default;
};

int inner_margin(int cell_px) { return cell_px / 8; }

void paint_cell(Frame& frame, Cell c, const Appearance& look, const Palette& palette, int cell_px) {
  const int m = inner_margin(cell_px);
  const Rgb base = palette[look.base];
  const Rgb inner = look.inner ? palette[*look.inner] : base;
  for (int dy = 0; dy < cell_px; ++dy) {
    for (int dx = 0; dx < cell_px; ++dx) {
      const bool in = dx >= m && dy >= m && dx < cell_px - m && dy < cell_px - m;
      const Rgb col = in ? inner : base;
      std::uint8_t* p = frame.pixel(c.col * cell_px + dx, c.row * cell_px + dy);
      p[0] = col.r;
      p[1] = col.g;
      p[2] = col.b;
    }
  }
}

Frame rasterize(Bounds grid, const std::vector<Appearance>& looks, const Palette& palette,
                int cell_px) {
  Frame frame(grid.cols * cell_px, grid.rows * cell_px);
  for (int i = 0; i < grid.area(); ++i) paint_cell(frame, grid.cell(i), looks[i], palette, cell_px);
  return frame;
}

std::vector<Appearance> maze_looks(const MazeBoard& board, const MazeCanvas& painted) {
  const Bounds b = board.pixel_bounds();
  std::vector<Appearance> looks(b.area());
  const Cell start = board.start_pixel();
  const Cell goal = board.goal_pixel();
  for (int i = 0; i < b.area(); ++i) {
    const Cell c = b.cell(i);
    Role role = Role::Floor;
    if (c == start) role = Role::StartMarker;
    else if (painted[i]) role = Role::Path;
    else if (board.walls[i]) role = Role::Wall;
    else if (c == goal) role = Role::GoalMarker;
    looks[i].base = role;
  }
  return looks;
}

std::vector<Appearance> flow_looks(const FlowBoard& board, const FlowCanvas& canvas) {
  const Bounds b = board.bounds();
  std::vector<Appearance> looks(b.area());
  for (int i = 0; i < b.area(); ++i) {
    const int color = canvas.color[i];
    if (color < 0) continue;
    if (canvas.filled[i]) looks[i].base = flow_role(color);
    else looks[i].inner = flow_role(color);
  }
  return looks;
}

std::vector<Appearance> sokoban_looks(const SokobanLevel& level, const SokobanState& state) {
  const Bounds b = level.bounds();
  std::vector<Appearance> looks(b.area());
  for (int i = 0; i < b.area(); ++i) {
    const Cell c = b.cell(i);
    if (!level.is_floor(c)) {
      looks[i].base = Role::Wall;
      continue;
    }
    looks[i].base = level.is_target(c) ? Role::Target : Role::Floor;
    if (state.has_box(c)) looks[i].inner = Role::Box;
    else if (state.player == c) looks[i].inner = Role::Player;
  }
  return looks;
}

void check_cell_px(int cell_px) {
  if (cell_px < 8) throw Error(ErrorCode::InvalidArgument, "cell_px must be >= 8");
}

}  // namespace

FlowCanvas FlowCanvas::initial(const FlowBoard& board) {
  FlowCanvas canvas;
  const Bounds b = board.bounds();
  canvas.color.assign(b.area(), -1);
  canvas.filled.assign(b.area(), 0);
  for (int i = 0; i < board.num_colors(); ++i) {
    canvas.color[b.index(board.endpoints[i].first)] = i;
    canvas.color[b.index(board.endpoints[i].second)] = i;
  }
  return canvas;
}

Frame draw_maze(const MazeBoard& board, const MazeCanvas& painted, const Palette& palette,
                int cell_px) {
  return rasterize(board.pixel_bounds(), maze_looks(board, painted), palette, cell_px);
}

Frame draw_flow(const FlowBoard& board, const FlowCanvas& canvas, const Palette& palette,
                int cell_px) {
  return rasterize(board.bounds(), flow_looks(board, canvas), palette, cell_px);
}

Frame draw_sokoban(const SokobanLevel& level, const SokobanState& state, const Palette& palette,
                   int cell_px) {
  return rasterize(level.bounds(), sokoban_looks(level, state), palette, cell_px);
}

// ---- playback ----------------------------------------------------------------

Playback::Playback(const TaskInstance& inst) : inst_(&inst) {
  switch (inst.task) {
    case Task::Maze:
      head_ = inst.maze().start_pixel();
      maze_.assign(inst.maze().walls.size(), 0);
      break;
    case Task::FlowFree:
      flow_ = FlowCanvas::initial(inst.flow());
      if (inst.flow().num_colors() > 0) head_ = inst.flow().endpoints.front().first;
      break;
    case Task::Sokoban:
      sokoban_ = inst.sokoban().initial_state();
      break;
  }
}

bool Playback::apply(Action a) {
  switch (inst_->task) {
    case Task::Maze: {
      const MazeBoard& board = inst_->maze();
      const Cell next = offset(head_, a);
      if (!board.pixel_bounds().contains(next)) return false;
      head_ = next;
      if (next != board.start_pixel()) maze_[board.pixel_bounds().index(next)] = 1;
      return true;
    }
    case Task::FlowFree: {
      const FlowBoard& board = inst_->flow();
      if (segment_ >= board.num_colors()) return false;
      const Cell next = offset(head_, a);
      if (!board.bounds().contains(next)) return false;
      const Bounds b = board.bounds();
      flow_.color[b.index(next)] = segment_;
      flow_.filled[b.index(next)] = 1;
      flow_.filled[b.index(head_)] = 1;
      head_ = next;
      if (next == board.endpoints[segment_].second) {
        ++segment_;
        if (segment_ < board.num_colors()) head_ = board.endpoints[segment_].first;
      }
      return true;
    }
    case Task::Sokoban: {
      auto next = try_step(inst_->sokoban(), sokoban_, a);
      if (!next) return false;
      sokoban_ = std::move(*next);
      return true;
    }
  }
  return false;
}

bool Playback::goal_reached() const {
  switch (inst_->task) {
    case Task::Maze: return head_ == inst_->maze().goal_pixel();
    case Task::FlowFree: return segment_ >= inst_->flow().num_colors();
    case Task::Sokoban: return inst_->sokoban().solved(sokoban_);
  }
  return false;
}

Frame Playback::draw(const Palette& palette, int cell_px) const {
  switch (inst_->task) {
    case Task::Maze: return draw_maze(inst_->maze(), maze_, palette, cell_px);
    case Task::FlowFree: return draw_flow(inst_->flow(), flow_, palette, cell_px);
    case Task::Sokoban: return draw_sokoban(inst_->sokoban(), sokoban_, palette, cell_px);
  }
  return {};
}

FrameSequence render_actions(const TaskInstance& inst, std::span<const Action> actions,
                             int cell_px) {
  check_cell_px(cell_px);
  const Palette& palette = inst.palette();
  Playback play(inst);
  FrameSequence seq;
  seq.frames.reserve(actions.size() + 1);
  seq.frames.push_back(play.draw(palette, cell_px));
  for (Action a : actions) {
    if (play.apply(a)) seq.frames.push_back(play.draw(palette, cell_px));
    else seq.frames.push_back(seq.frames.back());
  }
  return seq;
}

FrameSequence render_trajectory(const TaskInstance& inst, int cell_px, std::optional<int> pad_to) {
  FrameSequence seq = render_actions(inst, inst.gt_actions, cell_px);
  if (pad_to) {
    if (*pad_to < static_cast<int>(seq.size())) {
      throw Error(ErrorCode::PadTooSmall, "pad_to " + std::to_string(*pad_to) + " < " +
                                              std::to_string(seq.size()) + " logical frames");
    }
    const Frame last = seq.back();
    seq.frames.resize(static_cast<std::size_t>(*pad_to), last);
  }
  return seq;
}

FrameSequence render_trajectory(const TaskInstance& inst) {
  return render_trajectory(inst, inst.cell_px);
}

// ---- parsing -------------------------------------------------------------------

ParsedGrid parse_frame(const Frame& frame, const TaskInstance& inst) {
  const Bounds grid = inst.grid();
  const int px = inst.cell_px;
  if (px < 8 || frame.width != grid.cols * px || frame.height != grid.rows * px ||
      frame.rgb.size() != static_cast<std::size_t>(frame.width) * frame.height * 3) {
    throw Error(ErrorCode::GeometryMismatch,
                "frame " + std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                    " does not match a " + std::to_string(grid.rows) + "x" +
                    std::to_string(grid.cols) + " grid at cell_px " + std::to_string(px));
  }
  const Palette& palette = inst.palette();
  ParsedGrid out;
  out.rows = grid.rows;
  out.cols = grid.cols;
  out.labels.resize(grid.area());
  const int lo = px / 4;
  const int hi = px - px / 4;
  const double count = double(hi - lo) * (hi - lo);
  for (int i = 0; i < grid.area(); ++i) {
    const Cell c = grid.cell(i);
    double sum[3] = {0, 0, 0};
    for (int dy = lo; dy < hi; ++dy) {
      for (int dx = lo; dx < hi; ++dx) {
        const std::uint8_t* p = frame.pixel(c.col * px + dx, c.row * px + dy);
        sum[0] += p[0];
        sum[1] += p[1];
        sum[2] += p[2];
      }
    }
    out.labels[i] = palette.classify(sum[0] / count, sum[1] / count, sum[2] / count, kParseTolerance);
  }
  out.rims = std::vector<std::optional<Role>>(grid.area());
  const int m = std::max(1, inner_margin(px));
  for (int i = 0; i < grid.area(); ++i) {
    const Cell c = grid.cell(i);
    double sum[3] = {0, 0, 0};
    double n = 0;
    for (int dy = 0; dy < px; ++dy) {
      for (int dx = 0; dx < px; ++dx) {
        if (dx >= m && dy >= m && dx < px - m && dy < px - m) continue;
        const std::uint8_t* p = frame.pixel(c.col * px + dx, c.row * px + dy);
        sum[0] += p[0];
        sum[1] += p[1];
        sum[2] += p[2];
        n += 1;
      }
    }
    out.rims[i] = palette.classify(sum[0] / n, sum[1] / n, sum[2] / n, kParseTolerance);
  }
  return out;
}

MazeCanvas maze_canvas_from(const ParsedGrid& grid) {
  MazeCanvas painted(grid.labels.size(), 0);
  for (std::size_t i = 0; i < grid.labels.size(); ++i) painted[i] = grid.labels[i] == Role::Path;
  return painted;
}

FlowCanvas flow_canvas_from(const ParsedGrid& grid, int num_colors) {
  FlowCanvas canvas;
  canvas.color.assign(grid.labels.size(), -1);
  canvas.filled.assign(grid.labels.size(), 0);
  for (std::size_t i = 0; i < grid.labels.size(); ++i) {
    if (!grid.labels[i]) continue;
    auto idx = flow_index(*grid.labels[i]);
    if (!idx || *idx >= num_colors) continue;
    canvas.color[i] = *idx;
    canvas.filled[i] = grid.rims[i] == grid.labels[i];
  }
  return canvas;
}

std::optional<SokobanState> sokoban_state_from(const ParsedGrid& grid, const SokobanLevel& level) {
  if (grid.rows != level.rows || grid.cols != level.cols) return std::nullopt;
  SokobanState state;
  int players = 0;
  const Bounds b = level.bounds();
  for (int i = 0; i < b.area(); ++i) {
    const Cell c = b.cell(i);
    const auto label = grid.labels[i];
    if (!level.is_floor(c)) {
      if (label != Role::Wall) return std::nullopt;
      continue;
    }
    if (!label) return std::nullopt;
    switch (*label) {
      case Role::Floor:
      case Role::Target: break;
      case Role::Box: state.boxes.push_back(c); break;
      case Role::Player:
        state.player = c;
        ++players;
        break;
      default: return std::nullopt;
    }
  }
  if (players != 1 || state.boxes.size() != level.targets.size()) return std::nullopt;
  return state;
}

namespace {

[[noreturn]] void ambiguous(std::size_t transition, const std::string& why) {
  throw Error(ErrorCode::AmbiguousTransition,
              "transition " + std::to_string(transition) + ": " + why);
}

std::vector<Cell> cells_labeled(const ParsedGrid& grid, Role role) {
  std::vector<Cell> out;
  const Bounds b{grid.rows, grid.cols};
  for (int i = 0; i < b.area(); ++i)
    if (grid.labels[i] == role) out.push_back(b.cell(i));
  return out;
}

}  // namespace

std::vector<Action> decode_actions(const FrameSequence& seq, const TaskInstance& inst,
                                   DecodeMode mode) {
  if (inst.task == Task::FlowFree) {
    throw Error(ErrorCode::InvalidArgument, "action decoding supports maze and sokoban only");
  }
  std::vector<Action> actions;
  if (seq.empty()) return actions;
  const bool strict = mode == DecodeMode::Strict;
  ParsedGrid prev = parse_frame(seq.frames[0], inst);
  Cell head = inst.task == Task::Maze ? inst.maze().start_pixel() : Cell{};
  const Bounds b = inst.grid();

  for (std::size_t f = 1; f < seq.size(); ++f) {
    ParsedGrid cur = parse_frame(seq.frames[f], inst);
    if (cur.labels == prev.labels) continue;
    if (inst.task == Task::Sokoban) {
      auto before = cells_labeled(prev, Role::Player);
      auto after = cells_labeled(cur, Role::Player);
      std::optional<Action> dir;
      if (before.size() == 1 && after.size() == 1) dir = step_direction(before[0], after[0]);
      if (dir) actions.push_back(*dir);
      else if (strict) ambiguous(f - 1, "no single unit player displacement");
    } else {
      std::vector<Cell> fresh;
      bool erased = false;
      for (int i = 0; i < b.area(); ++i) {
        const bool was = prev.labels[i] == Role::Path;
        const bool now = cur.labels[i] == Role::Path;
        if (now && !was) fresh.push_back(b.cell(i));
        if (was && !now) erased = true;
      }
      std::optional<Action> dir;
      if (!erased && fresh.size() == 1) dir = step_direction(head, fresh[0]);
      if (dir) {
        actions.push_back(*dir);
        head = fresh[0];
      } else if (strict) {
        ambiguous(f - 1, "expected one newly painted pixel next to the path head");
      }
    }
    prev = std::move(cur);
  }
  return actions;
}

}  // namespace vrlvr
