// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "json.hpp"
#include "vrlvr/instance.hpp"
#include "vrlvr/render.hpp"

namespace vrlvr {

enum class AlignmentLevel { Pixel, Cell, Action };

const char* level_name(AlignmentLevel level);

struct AlignmentScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  AlignmentLevel level = AlignmentLevel::Action;
};

/// P = hits/predicted, R = hits/reference, each 0 on an empty denominator;
/// F1 = 2PR/(P+R), 0 when P+R = 0.
AlignmentScore alignment_from_counts(std::size_t hits, std::size_t predicted,
                                     std::size_t reference, AlignmentLevel level);

/// Per-channel absolute difference above this marks a changed raster pixel.
inline constexpr int kChangeThreshold = 25;

/// Change mask of each sequence (final vs initial frame), compared
/// raster-pixel by raster-pixel. Throws GeometryMismatch on size mismatch.
AlignmentScore f1_maze_pixel(const FrameSequence& pred, const FrameSequence& gt);

/// Final-frame cell labels: predicted positives are cells showing one of the
/// puzzle's flow colors; a hit must match the reference cell's color.
AlignmentScore f1_flowfree_cell(const FrameSequence& pred, const FrameSequence& gt,
                                const TaskInstance& inst);

/// Index-wise matches over the common prefix length, with full-length
/// denominators.
AlignmentScore f1_sokoban_action(std::span<const Action> pred, std::span<const Action> gt);

nlohmann::json alignment_to_json(const AlignmentScore& s);

}  // namespace vrlvr
