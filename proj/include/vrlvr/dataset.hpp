// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vrlvr/instance.hpp"
#include "vrlvr/render.hpp"

namespace vrlvr {

/// One instance directory: meta.json plus its frames.
struct DatasetEntry {
  TaskInstance instance;
  FrameSequence frames;

  friend bool operator==(const DatasetEntry&, const DatasetEntry&) = default;
};

void write_png(const std::filesystem::path& path, const Frame& frame);
/// Throws CorruptFrame when the file cannot be decoded.
Frame read_png(const std::filesystem::path& path);

/// Layout:
///   <dir>/index.jsonl              one {"id","task","frames"} object per line
///   <dir>/<id>/meta.json           instance metadata (schema_version 1)
///   <dir>/<id>/frame_0000.png ...  lossless RGB frames
/// Each instance directory is written to a temporary sibling and renamed
/// into place. Instances without an id get "<task>_<index>".
void write_dataset(const std::vector<DatasetEntry>& entries, const std::filesystem::path& dir);

/// Renders ground truth for every instance and writes the dataset.
void write_instances(const std::vector<TaskInstance>& instances, const std::filesystem::path& dir);

/// Throws SchemaVersionMismatch for a missing index/meta.json or unexpected
/// schema, CorruptFrame when frame files disagree with the recorded count.
std::vector<DatasetEntry> read_dataset(const std::filesystem::path& dir);

/// Ids listed in index.jsonl, in file order.
std::vector<std::string> read_index(const std::filesystem::path& dir);

/// All frame_XXXX.png files of one instance directory, in order.
FrameSequence read_frames(const std::filesystem::path& instance_dir);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace vrlvr
