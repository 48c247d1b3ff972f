// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/sokoban.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "vrlvr/error.hpp"
#include "vrlvr/rng.hpp"

namespace vrlvr {

namespace {

// (p, B) packed into 8-bit cell indices: player in the low byte, boxes in
// sorted order above it.
struct StateCodec {
  Bounds bounds;

  std::uint64_t encode(const SokobanState& s) const {
    std::uint64_t key = static_cast<std::uint64_t>(bounds.index(s.player));
    int shift = 8;
    for (const Cell& b : s.boxes) {
      key |= static_cast<std::uint64_t>(bounds.index(b)) << shift;
      shift += 8;
    }
    return key;
  }

  SokobanState decode(std::uint64_t key, std::size_t num_boxes) const {
    SokobanState s;
    s.player = bounds.cell(static_cast<int>(key & 0xff));
    for (std::size_t i = 0; i < num_boxes; ++i)
      s.boxes.push_back(bounds.cell(static_cast<int>((key >> (8 * (i + 1))) & 0xff)));
    return s;
  }
};

void sort_cells(std::vector<Cell>& cells) { std::sort(cells.begin(), cells.end()); }

}  // namespace

bool SokobanState::has_box(Cell c) const {
  return std::binary_search(boxes.begin(), boxes.end(), c);
}

bool SokobanLevel::is_target(Cell c) const {
  return std::binary_search(targets.begin(), targets.end(), c);
}

std::optional<SokobanState> try_step(const SokobanLevel& level, const SokobanState& state,
                                     Action a) {
  Cell next = offset(state.player, a);
  if (!level.is_floor(next)) return std::nullopt;
  if (!state.has_box(next)) return SokobanState{next, state.boxes};
  Cell beyond = offset(next, a);
  if (!level.is_floor(beyond) || state.has_box(beyond)) return std::nullopt;
  SokobanState out{next, state.boxes};
  *std::find(out.boxes.begin(), out.boxes.end(), next) = beyond;
  sort_cells(out.boxes);
  return out;
}

SokobanState sokoban_step(const SokobanLevel& level, const SokobanState& state, Action a) {
  auto out = try_step(level, state, a);
  if (!out) {
    throw Error(ErrorCode::IllegalMove, std::string("action ") + action_char(a) + " from (" +
                                            std::to_string(state.player.row) + "," +
                                            std::to_string(state.player.col) + ")");
  }
  return *out;
}

std::optional<SokobanSolution> sokoban_solve(const SokobanLevel& level, int state_cap) {
  if (level.rows * level.cols > 256 || level.boxes.size() > 7) {
    throw Error(ErrorCode::InvalidArgument, "solver supports at most 256 cells and 7 boxes");
  }
  const StateCodec codec{level.bounds()};
  const SokobanState start = level.initial_state();
  const std::uint64_t start_key = codec.encode(start);

  struct Link {
    std::uint64_t parent;
    Action action;
  };
  std::unordered_map<std::uint64_t, Link> links;
  links.reserve(static_cast<std::size_t>(std::min(state_cap, 1 << 20)) * 2);
  links.emplace(start_key, Link{start_key, Action::U});
  std::deque<std::uint64_t> queue{start_key};

  std::optional<std::uint64_t> goal;
  if (level.solved(start)) goal = start_key;
  int expanded = 0;
  while (!goal && !queue.empty() && expanded < state_cap) {
    const std::uint64_t key = queue.front();
    queue.pop_front();
    ++expanded;
    const SokobanState s = codec.decode(key, level.boxes.size());
    for (Action a : kAllActions) {
      auto next = try_step(level, s, a);
      if (!next) continue;
      const std::uint64_t nk = codec.encode(*next);
      if (!links.emplace(nk, Link{key, a}).second) continue;
      if (level.solved(*next)) {
        goal = nk;
        break;
      }
      queue.push_back(nk);
    }
  }
  if (!goal) return std::nullopt;

  SokobanSolution sol;
  for (std::uint64_t at = *goal; at != start_key; at = links.at(at).parent)
    sol.actions.push_back(links.at(at).action);
  std::reverse(sol.actions.begin(), sol.actions.end());
  sol.states.push_back(start);
  for (Action a : sol.actions) sol.states.push_back(sokoban_step(level, sol.states.back(), a));
  return sol;
}

bool has_corner_deadlock(const SokobanLevel& level, const SokobanState& state) {
  for (const Cell& b : state.boxes) {
    if (level.is_target(b)) continue;
    const bool vertical = !level.is_floor(offset(b, Action::U)) || !level.is_floor(offset(b, Action::D));
    const bool horizontal = !level.is_floor(offset(b, Action::L)) || !level.is_floor(offset(b, Action::R));
    if (vertical && horizontal) return true;
  }
  return false;
}

namespace {

std::optional<SokobanLevel> sample_level(int g, int num_boxes, SeededRng& rng) {
  SokobanLevel level;
  level.rows = level.cols = g;
  level.walls.assign(static_cast<std::size_t>(g) * g, 1);
  const Bounds b = level.bounds();
  const int interior = (g - 2) * (g - 2);

  // Random-walk carve from an interior cell keeps the floor 4-connected.
  const int want = static_cast<int>(interior * (0.45 + 0.25 * rng.uniform01()));
  Cell cur{static_cast<int>(rng.uniform_int(1, g - 2)),
           static_cast<int>(rng.uniform_int(1, g - 2))};
  std::vector<Cell> floor{cur};
  level.walls[b.index(cur)] = 0;
  int guard = 0;
  while (static_cast<int>(floor.size()) < want && guard++ < 100 * interior) {
    Action a = kAllActions[static_cast<std::size_t>(rng.uniform_int(0, 3))];
    Cell next = offset(cur, a);
    if (next.row < 1 || next.col < 1 || next.row > g - 2 || next.col > g - 2) continue;
    cur = next;
    if (level.walls[b.index(cur)]) {
      level.walls[b.index(cur)] = 0;
      floor.push_back(cur);
    }
  }
  if (static_cast<int>(floor.size()) < 2 * num_boxes + 1) return std::nullopt;

  std::vector<Cell> shuffled = floor;
  rng.shuffle(shuffled);
  level.targets.assign(shuffled.begin(), shuffled.begin() + num_boxes);

  // Boxes and player come from a second draw so they may overlap targets.
  rng.shuffle(shuffled);
  level.boxes.assign(shuffled.begin(), shuffled.begin() + num_boxes);
  level.player = shuffled[num_boxes];
  sort_cells(level.targets);
  sort_cells(level.boxes);
  return level;
}

}  // namespace

SokobanInstance sokoban_generate(int grid_size, int num_boxes, std::uint64_t seed,
                                 int state_cap) {
  if (grid_size < 6 || grid_size > 10) {
    throw Error(ErrorCode::InvalidSize, "sokoban grid must be within [6, 10]");
  }
  if (num_boxes < 1 || num_boxes > 3) {
    throw Error(ErrorCode::InvalidSize, "sokoban box count must be within [1, 3]");
  }
  SeededRng rng = SeededRng(seed).child("sokoban/level");
  for (int attempt = 0; attempt < kSokobanRegenerateBudget; ++attempt) {
    auto level = sample_level(grid_size, num_boxes, rng);
    if (!level) continue;
    level->seed = seed;
    const SokobanState start = level->initial_state();
    if (level->solved(start) || has_corner_deadlock(*level, start)) continue;
    auto sol = sokoban_solve(*level, state_cap);
    if (!sol || sol->actions.size() > static_cast<std::size_t>(kSokobanMaxMoves)) continue;
    return {std::move(*level), std::move(*sol)};
  }
  throw Error(ErrorCode::GenerationExhausted,
              "no solvable sokoban level after " + std::to_string(kSokobanRegenerateBudget) +
                  " samples");
}

std::string level_to_string(const SokobanLevel& level) {
  std::string out;
  for (int r = 0; r < level.rows; ++r) {
    if (r) out.push_back('\n');
    for (int c = 0; c < level.cols; ++c) {
      const Cell cell{r, c};
      const bool target = level.is_target(cell);
      const bool box = std::binary_search(level.boxes.begin(), level.boxes.end(), cell);
      char ch = ' ';
      if (!level.is_floor(cell)) ch = '#';
      else if (level.player == cell) ch = target ? '+' : '@';
      else if (box) ch = target ? '*' : '$';
      else if (target) ch = '.';
      out.push_back(ch);
    }
  }
  return out;
}

SokobanLevel level_from_string(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) lines.push_back(line);
  SokobanLevel level;
  level.rows = static_cast<int>(lines.size());
  for (const auto& l : lines) level.cols = std::max(level.cols, static_cast<int>(l.size()));
  level.walls.assign(static_cast<std::size_t>(level.rows) * level.cols, 1);
  int players = 0;
  for (int r = 0; r < level.rows; ++r) {
    for (int c = 0; c < static_cast<int>(lines[r].size()); ++c) {
      const char ch = lines[r][c];
      const Cell cell{r, c};
      if (ch == '#') continue;
      level.walls[level.bounds().index(cell)] = 0;
      switch (ch) {
        case ' ': break;
        case '@': level.player = cell; ++players; break;
        case '+': level.player = cell; ++players; level.targets.push_back(cell); break;
        case '$': level.boxes.push_back(cell); break;
        case '*': level.boxes.push_back(cell); level.targets.push_back(cell); break;
        case '.': level.targets.push_back(cell); break;
        default:
          throw Error(ErrorCode::InvalidArgument, std::string("bad sokoban glyph '") + ch + "'");
      }
    }
  }
  if (players != 1) throw Error(ErrorCode::InvalidArgument, "level needs exactly one player");
  sort_cells(level.boxes);
  sort_cells(level.targets);
  return level;
}

}  // namespace vrlvr
