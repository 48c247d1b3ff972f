// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "vrlvr/dataset.hpp"
#include "vrlvr/metrics.hpp"
#include "vrlvr/rewards.hpp"

namespace vrlvr {

struct InstanceScore {
  std::string id;
  Task task = Task::Maze;
  RewardBreakdown reward;
  AlignmentScore alignment;
  bool success = false;
  std::string diagnostic;
};

/// Means over one task's instances, in percent.
struct TaskAggregate {
  Task task = Task::Maze;
  std::size_t count = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double success_rate = 0.0;
  double mean_reward = 0.0;  // combined reward, in [0, 1]
};

struct ScoreReport {
  std::vector<InstanceScore> instances;  // sorted by id
  std::vector<TaskAggregate> tasks;      // maze, flowfree, sokoban order; absent tasks omitted
};

/// Scores one predicted sequence against its reference instance and frames.
/// Parse failures yield zero scores and a diagnostic instead of throwing.
InstanceScore score_instance(const FrameSequence& pred, const TaskInstance& ref,
                             const FrameSequence& ref_frames);

/// Pairs predictions with references by id. Throws MismatchedManifest when
/// the id sets differ.
ScoreReport score_entries(const std::vector<std::pair<std::string, FrameSequence>>& preds,
                          const std::vector<DatasetEntry>& refs, int jobs = 1);

/// Reads <pred_dir>/index.jsonl and each <pred_dir>/<id>/frame_*.png; the
/// reference directory is a full dataset.
ScoreReport score_datasets(const std::filesystem::path& pred_dir,
                           const std::filesystem::path& ref_dir, int jobs = 1);

nlohmann::json report_to_json(const ScoreReport& report);
/// Prec / Rec / F1 / SR columns per task.
std::string report_table(const ScoreReport& report);

}  // namespace vrlvr
