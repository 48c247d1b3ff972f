// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/score.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "vrlvr/error.hpp"
#include "vrlvr/parallel.hpp"

namespace vrlvr {

namespace fs = std::filesystem;

InstanceScore score_instance(const FrameSequence& pred, const TaskInstance& ref,
                             const FrameSequence& ref_frames) {
  InstanceScore s;
  s.id = ref.id;
  s.task = ref.task;
  s.reward.task = ref.task;
  try {
    s.reward = dispatch_reward(pred, ref);
    s.success = s.reward.success;
    switch (ref.task) {
      case Task::Maze: s.alignment = f1_maze_pixel(pred, ref_frames); break;
      case Task::FlowFree: s.alignment = f1_flowfree_cell(pred, ref_frames, ref); break;
      case Task::Sokoban:
        s.alignment = f1_sokoban_action(decode_actions(pred, ref, DecodeMode::Lenient), ref.gt_actions);
        break;
    }
  } catch (const Error& e) {
    s.success = false;
    s.diagnostic = e.what();
    s.reward.success = false;
    s.reward.diagnostic = e.what();
    s.alignment = alignment_from_counts(0, 0, 0,
                                        ref.task == Task::Maze       ? AlignmentLevel::Pixel
                                        : ref.task == Task::FlowFree ? AlignmentLevel::Cell
                                                                     : AlignmentLevel::Action);
  }
  return s;
}

namespace {

std::vector<TaskAggregate> aggregate(const std::vector<InstanceScore>& scores) {
  std::vector<TaskAggregate> out;
  for (Task task : {Task::Maze, Task::FlowFree, Task::Sokoban}) {
    TaskAggregate agg;
    agg.task = task;
    double p = 0, r = 0, f = 0, sr = 0, rew = 0;
    for (const auto& s : scores) {
      if (s.task != task) continue;
      ++agg.count;
      p += s.alignment.precision;
      r += s.alignment.recall;
      f += s.alignment.f1;
      sr += s.success ? 1.0 : 0.0;
      rew += s.reward.combined;
    }
    if (agg.count == 0) continue;
    const double n = static_cast<double>(agg.count);
    agg.precision = 100.0 * p / n;
    agg.recall = 100.0 * r / n;
    agg.f1 = 100.0 * f / n;
    agg.success_rate = 100.0 * sr / n;
    agg.mean_reward = rew / n;
    out.push_back(agg);
  }
  return out;
}

void check_manifest(std::vector<std::string> pred_ids, std::vector<std::string> ref_ids) {
  std::sort(pred_ids.begin(), pred_ids.end());
  std::sort(ref_ids.begin(), ref_ids.end());
  if (pred_ids == ref_ids) return;
  std::vector<std::string> missing, extra;
  std::set_difference(ref_ids.begin(), ref_ids.end(), pred_ids.begin(), pred_ids.end(),
                      std::back_inserter(missing));
  std::set_difference(pred_ids.begin(), pred_ids.end(), ref_ids.begin(), ref_ids.end(),
                      std::back_inserter(extra));
  std::string msg = std::to_string(missing.size()) + " reference instance(s) missing from predictions";
  if (!missing.empty()) msg += " (first: " + missing.front() + ")";
  msg += ", " + std::to_string(extra.size()) + " unexpected";
  if (!extra.empty()) msg += " (first: " + extra.front() + ")";
  throw Error(ErrorCode::MismatchedManifest, msg);
}

}  // namespace

ScoreReport score_entries(const std::vector<std::pair<std::string, FrameSequence>>& preds,
                          const std::vector<DatasetEntry>& refs, int jobs) {
  std::vector<std::string> pred_ids, ref_ids;
  for (const auto& p : preds) pred_ids.push_back(p.first);
  for (const auto& r : refs) ref_ids.push_back(r.instance.id);
  check_manifest(pred_ids, ref_ids);

  std::map<std::string, const FrameSequence*> by_id;
  for (const auto& p : preds) by_id[p.first] = &p.second;

  std::vector<const DatasetEntry*> order;
  for (const auto& r : refs) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const DatasetEntry* a, const DatasetEntry* b) { return a->instance.id < b->instance.id; });

  ScoreReport report;
  report.instances.resize(order.size());
  parallel_for(order.size(), jobs, [&](std::size_t i) {
    const DatasetEntry& ref = *order[i];
    report.instances[i] = score_instance(*by_id.at(ref.instance.id), ref.instance, ref.frames);
  });
  report.tasks = aggregate(report.instances);
  return report;
}

ScoreReport score_datasets(const fs::path& pred_dir, const fs::path& ref_dir, int jobs) {
  const std::vector<DatasetEntry> refs = read_dataset(ref_dir);
  const std::vector<std::string> pred_ids = read_index(pred_dir);
  std::vector<std::string> ref_ids;
  for (const auto& r : refs) ref_ids.push_back(r.instance.id);
  check_manifest(pred_ids, ref_ids);

  std::vector<std::pair<std::string, FrameSequence>> preds(pred_ids.size());
  parallel_for(pred_ids.size(), jobs, [&](std::size_t i) {
    preds[i] = {pred_ids[i], read_frames(pred_dir / pred_ids[i])};
  });
  return score_entries(preds, refs, jobs);
}

nlohmann::json report_to_json(const ScoreReport& report) {
  nlohmann::json j;
  j["instances"] = nlohmann::json::array();
  for (const auto& s : report.instances) {
    nlohmann::json e = {{"id", s.id},
                        {"task", task_name(s.task)},
                        {"reward", breakdown_to_json(s.reward)},
                        {"alignment", alignment_to_json(s.alignment)},
                        {"success", s.success}};
    if (!s.diagnostic.empty()) e["diagnostic"] = s.diagnostic;
    j["instances"].push_back(e);
  }
  j["aggregate"] = nlohmann::json::object();
  for (const auto& t : report.tasks) {
    j["aggregate"][task_name(t.task)] = {{"count", t.count},
                                         {"precision", t.precision},
                                         {"recall", t.recall},
                                         {"f1", t.f1},
                                         {"success_rate", t.success_rate},
                                         {"mean_reward", t.mean_reward}};
  }
  return j;
}

std::string report_table(const ScoreReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %6s %7s %7s %7s %7s\n", "task", "n", "Prec", "Rec", "F1", "SR");
  out += line;
  for (const auto& t : report.tasks) {
    std::snprintf(line, sizeof line, "%-10s %6zu %7.1f %7.1f %7.1f %7.1f\n", task_name(t.task), t.count,
                  t.precision, t.recall, t.f1, t.success_rate);
    out += line;
  }
  return out;
}

}  // namespace vrlvr
