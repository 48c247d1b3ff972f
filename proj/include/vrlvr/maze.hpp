// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vrlvr/grid.hpp"

namespace vrlvr {

enum class CarveAlgorithm : std::uint8_t { DFS, PRIM, KRUSKAL };

const char* carve_name(CarveAlgorithm algo);
CarveAlgorithm carve_from_name(const std::string& name);

/// A perfect maze on an odd n x n pixel lattice. Logical cell (r, c) lives at
/// pixel (2r+1, 2c+1); the pixel between two adjacent logical cells is their
/// corridor, open iff the carve joined them.
struct MazeBoard {
  int n = 0;
  std::vector<std::uint8_t> walls;  // n*n, row-major, 1 = wall
  Cell start{0, 0};                 // logical
  Cell goal{0, 0};                  // logical
  CarveAlgorithm algorithm = CarveAlgorithm::DFS;
  std::uint64_t seed = 0;

  int logical_size() const { return (n - 1) / 2; }
  Bounds pixel_bounds() const { return {n, n}; }
  bool is_wall(Cell pixel) const {
    return !pixel_bounds().contains(pixel) || walls[pixel.row * n + pixel.col] != 0;
  }
  static Cell to_pixel(Cell logical) { return {2 * logical.row + 1, 2 * logical.col + 1}; }
  Cell start_pixel() const { return to_pixel(start); }
  Cell goal_pixel() const { return to_pixel(goal); }

  /// Internal corridor pixels that are open.
  int opened_internal_walls() const;

  friend bool operator==(const MazeBoard&, const MazeBoard&) = default;
};

struct MazeSolution {
  std::vector<Cell> logical_path;
  std::vector<Cell> pixel_path;
  std::vector<Action> actions;
};

/// Throws InvalidSize unless n is odd and 5 <= n <= 99.
MazeBoard maze_generate(int n, CarveAlgorithm algo, std::uint64_t seed);

/// BFS over the logical corridor graph, neighbors scanned U, D, L, R.
MazeSolution maze_solve(const MazeBoard& board);

std::vector<Cell> expand_to_pixels(const MazeBoard& board, std::span<const Cell> logical_path);

/// Wall-respecting BFS distance from every pixel to `target` (-1 where
/// unreachable or on a wall).
std::vector<int> pixel_distances(const MazeBoard& board, Cell target);

/// Row-major '1'/'0' bit string of the wall bitmap.
std::string walls_to_bits(const MazeBoard& board);
std::vector<std::uint8_t> walls_from_bits(const std::string& bits, int n);

}  // namespace vrlvr
