// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "oracles.hpp"
#include "vrlvr/error.hpp"
#include "vrlvr/maze.hpp"
#include "vrlvr/rng.hpp"

using namespace vrlvr;

namespace {

// 7x7 with the top corridor and right column open: S . . / . . . / . . G
MazeBoard hook_board() {
  MazeBoard b;
  b.n = 7;
  b.walls.assign(49, 1);
  for (int c = 1; c <= 5; ++c) b.walls[1 * 7 + c] = 0;
  for (int r = 1; r <= 5; ++r) b.walls[r * 7 + 5] = 0;
  b.start = {0, 0};
  b.goal = {2, 2};
  return b;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("maze_generate basics") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const MazeBoard b = maze_generate(7, CarveAlgorithm::DFS, s);
    CHECK(b.logical_size() == 3);
    CHECK(b.opened_internal_walls() == 8);
  }
  CHECK(maze_generate(7, CarveAlgorithm::PRIM, 42).walls == maze_generate(7, CarveAlgorithm::PRIM, 42).walls);
  CHECK(code_of([] { maze_generate(8, CarveAlgorithm::DFS, 1); }) == ErrorCode::InvalidSize);
  CHECK(code_of([] { maze_generate(3, CarveAlgorithm::DFS, 1); }) == ErrorCode::InvalidSize);
}

TEST_CASE("every algorithm carves a spanning tree") {
  for (auto algo : {CarveAlgorithm::DFS, CarveAlgorithm::PRIM, CarveAlgorithm::KRUSKAL}) {
    for (int n : {5, 9, 15}) {
      const MazeBoard b = maze_generate(n, algo, 77 + n);
      const int m = b.logical_size();
      CHECK(b.opened_internal_walls() == m * m - 1);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          CHECK(oracle::flood_distance(b.walls, n, MazeBoard::to_pixel({0, 0}), MazeBoard::to_pixel({r, c})) >= 0);
    }
  }
}

TEST_CASE("maze_solve on a hand board") {
  const MazeBoard b = hook_board();
  const MazeSolution sol = maze_solve(b);
  CHECK(sol.logical_path.size() == 5);
  CHECK(derive_actions(sol.logical_path) == actions_from_string("RRDD"));
  CHECK(sol.actions == actions_from_string("RRRRDDDD"));
  CHECK(sol.pixel_path.front() == Cell{1, 1});
  CHECK(sol.pixel_path.back() == Cell{5, 5});
}

TEST_CASE("maze_solve with start = goal") {
  MazeBoard b;
  b.n = 5;
  b.walls.assign(25, 1);
  b.walls[6] = 0;
  b.start = b.goal = {0, 0};
  const MazeSolution sol = maze_solve(b);
  CHECK(sol.logical_path == std::vector<Cell>{{0, 0}});
  CHECK(sol.actions.empty());
}

TEST_CASE("maze_solve matches the flood-fill oracle") {
  SeededRng rng(3);
  for (int i = 0; i < 200; ++i) {
    const int n = 5 + 2 * static_cast<int>(rng.uniform_int(0, 8));
    const auto algo = static_cast<CarveAlgorithm>(rng.uniform_int(0, 2));
    const MazeBoard b = maze_generate(n, algo, rng.next_u64());
    const MazeSolution sol = maze_solve(b);
    const int d = oracle::flood_distance(b.walls, n, b.start_pixel(), b.goal_pixel());
    CHECK(static_cast<int>(sol.pixel_path.size()) - 1 == d);
    CHECK(sol.actions.size() == sol.pixel_path.size() - 1);
    for (Cell c : sol.pixel_path) CHECK_FALSE(b.is_wall(c));
    CHECK(replay(b.start_pixel(), sol.actions) == sol.pixel_path);
  }
}

TEST_CASE("expand_to_pixels") {
  const MazeBoard b = hook_board();
  const std::vector<Cell> two{{0, 0}, {0, 1}};
  CHECK(expand_to_pixels(b, two) == std::vector<Cell>{{1, 1}, {1, 2}, {1, 3}});
  const std::vector<Cell> one{{0, 0}};
  CHECK(expand_to_pixels(b, one) == std::vector<Cell>{{1, 1}});
  const std::vector<Cell> through_wall{{0, 0}, {1, 0}};
  CHECK(code_of([&] { expand_to_pixels(b, through_wall); }) == ErrorCode::WallViolation);
  const std::vector<Cell> jump{{0, 0}, {0, 2}};
  CHECK(code_of([&] { expand_to_pixels(b, jump); }) == ErrorCode::NonAdjacentCells);
}

TEST_CASE("wall bit strings round trip") {
  const MazeBoard b = maze_generate(11, CarveAlgorithm::KRUSKAL, 9);
  CHECK(walls_from_bits(walls_to_bits(b), 11) == b.walls);
  CHECK(carve_from_name(carve_name(CarveAlgorithm::PRIM)) == CarveAlgorithm::PRIM);
}
