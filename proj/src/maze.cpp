// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/maze.hpp"

#include <deque>
#include <numeric>

#include "vrlvr/error.hpp"
#include "vrlvr/rng.hpp"

namespace vrlvr {

namespace {

class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

struct Carver {
  MazeBoard& board;
  int size;

  bool inside(Cell c) const { return c.row >= 0 && c.col >= 0 && c.row < size && c.col < size; }

  void open_cell(Cell logical) {
    Cell p = MazeBoard::to_pixel(logical);
    board.walls[p.row * board.n + p.col] = 0;
  }

  void join(Cell a, Cell b) {
    Cell pa = MazeBoard::to_pixel(a);
    Cell pb = MazeBoard::to_pixel(b);
    board.walls[((pa.row + pb.row) / 2) * board.n + (pa.col + pb.col) / 2] = 0;
  }
};

void carve_dfs(Carver& carver, SeededRng& rng) {
  const int size = carver.size;
  std::vector<std::uint8_t> visited(size * size, 0);
  Cell root{static_cast<int>(rng.uniform_int(0, size - 1)),
            static_cast<int>(rng.uniform_int(0, size - 1))};
  std::vector<Cell> stack{root};
  visited[root.row * size + root.col] = 1;
  while (!stack.empty()) {
    Cell cur = stack.back();
    std::array<Action, 4> order = kAllActions;
    rng.shuffle(order);
    bool advanced = false;
    for (Action a : order) {
      Cell next = offset(cur, a);
      if (!carver.inside(next) || visited[next.row * size + next.col]) continue;
      visited[next.row * size + next.col] = 1;
      carver.join(cur, next);
      stack.push_back(next);
      advanced = true;
      break;
    }
    if (!advanced) stack.pop_back();
  }
}

void carve_prim(Carver& carver, SeededRng& rng) {
  const int size = carver.size;
  std::vector<std::uint8_t> in_maze(size * size, 0);
  struct Edge {
    Cell from;
    Cell to;
  };
  std::vector<Edge> frontier;
  auto add = [&](Cell c) {
    in_maze[c.row * size + c.col] = 1;
    for (Action a : kAllActions) {
      Cell n = offset(c, a);
      if (carver.inside(n) && !in_maze[n.row * size + n.col]) frontier.push_back({c, n});
    }
  };
  add({static_cast<int>(rng.uniform_int(0, size - 1)),
       static_cast<int>(rng.uniform_int(0, size - 1))});
  while (!frontier.empty()) {
    auto pick = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(frontier.size()) - 1));
    Edge e = frontier[pick];
    frontier[pick] = frontier.back();
    frontier.pop_back();
    if (in_maze[e.to.row * size + e.to.col]) continue;
    carver.join(e.from, e.to);
    add(e.to);
  }
}

void carve_kruskal(Carver& carver, SeededRng& rng) {
  const int size = carver.size;
  struct Edge {
    Cell a;
    Cell b;
  };
  std::vector<Edge> edges;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      if (c + 1 < size) edges.push_back({{r, c}, {r, c + 1}});
      if (r + 1 < size) edges.push_back({{r, c}, {r + 1, c}});
    }
  }
  rng.shuffle(edges);
  DisjointSet sets(size * size);
  for (const Edge& e : edges) {
    if (sets.unite(e.a.row * size + e.a.col, e.b.row * size + e.b.col)) carver.join(e.a, e.b);
  }
}

}  // namespace

const char* carve_name(CarveAlgorithm algo) {
  switch (algo) {
    case CarveAlgorithm::DFS: return "dfs";
    case CarveAlgorithm::PRIM: return "prim";
    case CarveAlgorithm::KRUSKAL: return "kruskal";
  }
  return "?";
}

CarveAlgorithm carve_from_name(const std::string& name) {
  if (name == "dfs") return CarveAlgorithm::DFS;
  if (name == "prim") return CarveAlgorithm::PRIM;
  if (name == "kruskal") return CarveAlgorithm::KRUSKAL;
  throw Error(ErrorCode::InvalidArgument, "unknown carve algorithm '" + name + "'");
}

int MazeBoard::opened_internal_walls() const {
  int opened = 0;
  for (int r = 1; r < n - 1; ++r) {
    for (int c = 1; c < n - 1; ++c) {
      const bool corridor = (r % 2 == 1) != (c % 2 == 1);
      if (corridor && !walls[r * n + c]) ++opened;
    }
  }
  return opened;
}

MazeBoard maze_generate(int n, CarveAlgorithm algo, std::uint64_t seed) {
  if (n % 2 == 0 || n < 5 || n > 99) {
    throw Error(ErrorCode::InvalidSize,
                "maze size must be odd and within [5, 99], got " + std::to_string(n));
  }
  MazeBoard board;
  board.n = n;
  board.walls.assign(static_cast<std::size_t>(n) * n, 1);
  board.algorithm = algo;
  board.seed = seed;
  const int size = board.logical_size();
  board.start = {0, 0};
  board.goal = {size - 1, size - 1};

  Carver carver{board, size};
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) carver.open_cell({r, c});

  SeededRng rng = SeededRng(seed).child(std::string("maze/") + carve_name(algo));
  switch (algo) {
    case CarveAlgorithm::DFS: carve_dfs(carver, rng); break;
    case CarveAlgorithm::PRIM: carve_prim(carver, rng); break;
    case CarveAlgorithm::KRUSKAL: carve_kruskal(carver, rng); break;
  }
  return board;
}

MazeSolution maze_solve(const MazeBoard& board) {
  const int size = board.logical_size();
  const Bounds logical{size, size};
  std::vector<int> parent(logical.area(), -1);
  std::vector<std::uint8_t> seen(logical.area(), 0);
  std::deque<Cell> queue{board.start};
  seen[logical.index(board.start)] = 1;
  while (!queue.empty()) {
    Cell cur = queue.front();
    queue.pop_front();
    if (cur == board.goal) break;
    for (Action a : kAllActions) {
      Cell next = offset(cur, a);
      if (!logical.contains(next) || seen[logical.index(next)]) continue;
      Cell corridor = offset(MazeBoard::to_pixel(cur), a);
      if (board.is_wall(corridor)) continue;
      seen[logical.index(next)] = 1;
      parent[logical.index(next)] = logical.index(cur);
      queue.push_back(next);
    }
  }

  MazeSolution sol;
  if (!seen[logical.index(board.goal)]) {
    throw Error(ErrorCode::InvalidArgument, "maze goal unreachable; board is not a spanning tree");
  }
  for (int at = logical.index(board.goal); at != -1; at = parent[at]) {
    sol.logical_path.push_back(logical.cell(at));
    if (logical.cell(at) == board.start) break;
  }
  std::reverse(sol.logical_path.begin(), sol.logical_path.end());
  sol.pixel_path = expand_to_pixels(board, sol.logical_path);
  sol.actions = derive_actions(sol.pixel_path);
  return sol;
}

std::vector<Cell> expand_to_pixels(const MazeBoard& board, std::span<const Cell> logical_path) {
  std::vector<Cell> pixels;
  if (logical_path.empty()) return pixels;
  pixels.reserve(2 * logical_path.size() - 1);
  pixels.push_back(MazeBoard::to_pixel(logical_path.front()));
  for (std::size_t i = 1; i < logical_path.size(); ++i) {
    if (!adjacent(logical_path[i - 1], logical_path[i])) {
      throw Error(ErrorCode::NonAdjacentCells,
                  "logical path step " + std::to_string(i) + " is not a unit move");
    }
    Cell from = MazeBoard::to_pixel(logical_path[i - 1]);
    Cell to = MazeBoard::to_pixel(logical_path[i]);
    Cell corridor{(from.row + to.row) / 2, (from.col + to.col) / 2};
    if (board.is_wall(corridor)) {
      throw Error(ErrorCode::WallViolation, "corridor pixel (" + std::to_string(corridor.row) +
                                                 "," + std::to_string(corridor.col) +
                                                 ") is a wall");
    }
    pixels.push_back(corridor);
    pixels.push_back(to);
  }
  return pixels;
}

std::vector<int> pixel_distances(const MazeBoard& board, Cell target) {
  const Bounds b = board.pixel_bounds();
  std::vector<int> dist(b.area(), -1);
  if (board.is_wall(target)) return dist;
  std::deque<Cell> queue{target};
  dist[b.index(target)] = 0;
  while (!queue.empty()) {
    Cell cur = queue.front();
    queue.pop_front();
    for (Action a : kAllActions) {
      Cell next = offset(cur, a);
      if (board.is_wall(next) || dist[b.index(next)] >= 0) continue;
      dist[b.index(next)] = dist[b.index(cur)] + 1;
      queue.push_back(next);
    }
  }
  return dist;
}

std::string walls_to_bits(const MazeBoard& board) {
  std::string bits;
  bits.reserve(board.walls.size());
  for (auto w : board.walls) bits.push_back(w ? '1' : '0');
  return bits;
}

std::vector<std::uint8_t> walls_from_bits(const std::string& bits, int n) {
  if (static_cast<int>(bits.size()) != n * n) {
    throw Error(ErrorCode::InvalidArgument, "wall bitmap has " + std::to_string(bits.size()) +
                                                " bits, expected " + std::to_string(n * n));
  }
  std::vector<std::uint8_t> walls;
  walls.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error(ErrorCode::InvalidArgument, "wall bitmap must be 0/1");
    walls.push_back(c == '1');
  }
  return walls;
}

}  // namespace vrlvr
