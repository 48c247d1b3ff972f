// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vrlvr/grid.hpp"

namespace vrlvr {

/// A FlowFree puzzle derived from a Hamiltonian path. Segment i carries color
/// i; its first and last cells are the endpoint dots shown in the puzzle.
struct FlowBoard {
  int n = 0;
  std::vector<std::pair<Cell, Cell>> endpoints;
  std::vector<std::vector<Cell>> segments;
  std::uint64_t seed = 0;

  int num_colors() const { return static_cast<int>(segments.size()); }
  Bounds bounds() const { return {n, n}; }

  friend bool operator==(const FlowBoard&, const FlowBoard&) = default;
};

inline constexpr int kWarnsdorffRestarts = 128;

/// Warnsdorff walk from a random start; ties broken by the seeded stream.
/// Throws GenerationExhausted after kWarnsdorffRestarts failed walks.
std::vector<Cell> hamiltonian_path(int n, std::uint64_t seed);

/// Cuts `path` into k contiguous segments of length >= 2, uniformly over all
/// such compositions. Throws TooManyColors if 2k > len(path).
FlowBoard split_into_flows(std::span<const Cell> path, int k, std::uint64_t seed);

/// Per-instance color count range used by the dataset generator:
/// [max(2, n^2/10), min(8, n^2/3)].
std::pair<int, int> flow_color_range(int n);

/// Hamiltonian path plus split, with k drawn from flow_color_range(n).
FlowBoard flowfree_generate(int n, std::uint64_t seed);

/// Concatenated per-segment moves, the action trajectory the renderer plays.
std::vector<Action> flow_actions(const FlowBoard& board);

}  // namespace vrlvr
