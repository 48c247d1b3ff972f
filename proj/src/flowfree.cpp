// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/flowfree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "vrlvr/error.hpp"
#include "vrlvr/rng.hpp"

namespace vrlvr {

namespace {

bool warnsdorff_walk(int n, SeededRng& rng, std::vector<Cell>& path) {
  const Bounds b{n, n};
  std::vector<std::uint8_t> visited(b.area(), 0);
  auto onward = [&](Cell c) {
    int count = 0;
    for (Action a : kAllActions) {
      Cell m = offset(c, a);
      if (b.contains(m) && !visited[b.index(m)]) ++count;
    }
    return count;
  };

  path.clear();
  Cell cur{static_cast<int>(rng.uniform_int(0, n - 1)),
           static_cast<int>(rng.uniform_int(0, n - 1))};
  visited[b.index(cur)] = 1;
  path.push_back(cur);
  std::vector<Cell> best;
  while (static_cast<int>(path.size()) < b.area()) {
    int best_degree = std::numeric_limits<int>::max();
    best.clear();
    for (Action a : kAllActions) {
      Cell m = offset(cur, a);
      if (!b.contains(m) || visited[b.index(m)]) continue;
      const int d = onward(m);
      if (d < best_degree) {
        best_degree = d;
        best.clear();
      }
      if (d == best_degree) best.push_back(m);
    }
    if (best.empty()) return false;
    cur = best[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(best.size()) - 1))];
    visited[b.index(cur)] = 1;
    path.push_back(cur);
  }
  return true;
}

}  // namespace

std::vector<Cell> hamiltonian_path(int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidSize, "grid size must be >= 1");
  SeededRng rng = SeededRng(seed).child("flowfree/hamiltonian");
  std::vector<Cell> path;
  for (int attempt = 0; attempt < kWarnsdorffRestarts; ++attempt) {
    if (warnsdorff_walk(n, rng, path)) return path;
  }
  throw Error(ErrorCode::GenerationExhausted,
              "no Hamiltonian path after " + std::to_string(kWarnsdorffRestarts) + " restarts");
}

FlowBoard split_into_flows(std::span<const Cell> path, int k, std::uint64_t seed) {
  const int total = static_cast<int>(path.size());
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "need at least one color");
  if (2 * k > total) {
    throw Error(ErrorCode::TooManyColors, std::to_string(k) + " colors need " +
                                              std::to_string(2 * k) + " cells, path has " +
                                              std::to_string(total));
  }
  // Stars and bars: the extra cells beyond 2 per segment are spread by
  // picking k-1 bar slots out of extra+k-1, uniform over compositions.
  SeededRng rng = SeededRng(seed).child("flowfree/split");
  const int extra = total - 2 * k;
  const int slots = extra + k - 1;
  std::vector<int> pool(slots);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k - 1; ++i) {
    auto j = static_cast<int>(rng.uniform_int(i, slots - 1));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> bars(pool.begin(), pool.begin() + (k - 1));
  std::sort(bars.begin(), bars.end());

  FlowBoard board;
  int n = 0;
  for (const Cell& c : path) n = std::max({n, c.row + 1, c.col + 1});
  board.n = n;
  board.seed = seed;
  int prev_bar = -1;
  int cursor = 0;
  for (int i = 0; i < k; ++i) {
    const int bar = i < k - 1 ? bars[i] : slots;
    const int length = 2 + (bar - prev_bar - 1);
    prev_bar = bar;
    std::vector<Cell> seg(path.begin() + cursor, path.begin() + cursor + length);
    cursor += length;
    board.endpoints.emplace_back(seg.front(), seg.back());
    board.segments.push_back(std::move(seg));
  }
  return board;
}

std::pair<int, int> flow_color_range(int n) {
  const int area = n * n;
  return {std::max(2, area / 10), std::min(8, area / 3)};
}

FlowBoard flowfree_generate(int n, std::uint64_t seed) {
  auto [lo, hi] = flow_color_range(n);
  if (hi < lo) throw Error(ErrorCode::InvalidSize, "grid too small for two colors");
  SeededRng rng = SeededRng(seed).child("flowfree/colors");
  const int k = static_cast<int>(rng.uniform_int(lo, hi));
  auto path = hamiltonian_path(n, seed);
  FlowBoard board = split_into_flows(path, k, seed);
  board.n = n;
  return board;
}

std::vector<Action> flow_actions(const FlowBoard& board) {
  std::vector<Action> actions;
  for (const auto& seg : board.segments) {
    auto part = derive_actions(seg);
    actions.insert(actions.end(), part.begin(), part.end());
  }
  return actions;
}

}  // namespace vrlvr
