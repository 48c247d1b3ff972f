// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/metrics.hpp"

#include <cstdlib>

#include "vrlvr/error.hpp"

namespace vrlvr {

const char* level_name(AlignmentLevel level) {
  switch (level) {
    case AlignmentLevel::Pixel: return "pixel";
    case AlignmentLevel::Cell: return "cell";
    case AlignmentLevel::Action: return "action";
  }
  return "?";
}

AlignmentScore alignment_from_counts(std::size_t hits, std::size_t predicted,
                                     std::size_t reference, AlignmentLevel level) {
  AlignmentScore s;
  s.level = level;
  s.precision = predicted ? double(hits) / double(predicted) : 0.0;
  s.recall = reference ? double(hits) / double(reference) : 0.0;
  // 2PR/(P+R) reduces to 2h/(p+r); the count form is exactly rounded.
  s.f1 = hits > 0 ? 2.0 * double(hits) / double(predicted + reference) : 0.0;
  return s;
}

namespace {

std::vector<std::uint8_t> change_mask(const FrameSequence& seq) {
  if (seq.empty()) throw Error(ErrorCode::UnparsableFrame, "empty frame sequence");
  const Frame& a = seq.front();
  const Frame& b = seq.back();
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::GeometryMismatch, "initial and final frames differ in size");
  }
  const std::size_t pixels = static_cast<std::size_t>(a.width) * a.height;
  std::vector<std::uint8_t> mask(pixels, 0);
  for (std::size_t p = 0; p < pixels; ++p) {
    for (int ch = 0; ch < 3; ++ch) {
      if (std::abs(int(a.rgb[p * 3 + ch]) - int(b.rgb[p * 3 + ch])) > kChangeThreshold) {
        mask[p] = 1;
        break;
      }
    }
  }
  return mask;
}

}  // namespace

AlignmentScore f1_maze_pixel(const FrameSequence& pred, const FrameSequence& gt) {
  const auto pm = change_mask(pred);
  const auto gm = change_mask(gt);
  if (pm.size() != gm.size() || pred.front().width != gt.front().width) {
    throw Error(ErrorCode::GeometryMismatch, "prediction and reference frames differ in size");
  }
  std::size_t hits = 0, predicted = 0, reference = 0;
  for (std::size_t p = 0; p < pm.size(); ++p) {
    predicted += pm[p];
    reference += gm[p];
    hits += pm[p] & gm[p];
  }
  return alignment_from_counts(hits, predicted, reference, AlignmentLevel::Pixel);
}

AlignmentScore f1_flowfree_cell(const FrameSequence& pred, const FrameSequence& gt,
                                const TaskInstance& inst) {
  if (pred.empty() || gt.empty()) throw Error(ErrorCode::UnparsableFrame, "empty frame sequence");
  const int k = inst.flow().num_colors();
  const FlowCanvas p = flow_canvas_from(parse_frame(pred.back(), inst), k);
  const FlowCanvas g = flow_canvas_from(parse_frame(gt.back(), inst), k);
  std::size_t hits = 0, predicted = 0, reference = 0;
  for (std::size_t i = 0; i < p.color.size(); ++i) {
    predicted += p.color[i] >= 0;
    reference += g.color[i] >= 0;
    hits += p.color[i] >= 0 && p.color[i] == g.color[i];
  }
  return alignment_from_counts(hits, predicted, reference, AlignmentLevel::Cell);
}

AlignmentScore f1_sokoban_action(std::span<const Action> pred, std::span<const Action> gt) {
  std::size_t hits = 0;
  const std::size_t common = std::min(pred.size(), gt.size());
  for (std::size_t i = 0; i < common; ++i) hits += pred[i] == gt[i];
  return alignment_from_counts(hits, pred.size(), gt.size(), AlignmentLevel::Action);
}

nlohmann::json alignment_to_json(const AlignmentScore& s) {
  return {{"level", level_name(s.level)},
          {"precision", s.precision},
          {"recall", s.recall},
          {"f1", s.f1}};
}

}  // namespace vrlvr
