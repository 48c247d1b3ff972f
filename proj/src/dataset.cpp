// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/dataset.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "vrlvr/error.hpp"

namespace vrlvr {

namespace fs = std::filesystem;
using nlohmann::json;

void write_png(const fs::path& path, const Frame& frame) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width);
  image.height = static_cast<png_uint_32>(frame.height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, frame.rgb.data(), 0, nullptr)) {
    throw Error(ErrorCode::CorruptFrame, "cannot write " + path.string() + ": " + image.message);
  }
}

Frame read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error(ErrorCode::CorruptFrame, "cannot read " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  Frame frame(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, frame.rgb.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::CorruptFrame, "cannot decode " + path.string() + ": " + image.message);
  }
  return frame;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  out << text;
}

namespace {

std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu.png", i);
  return buf;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_dataset(const std::vector<DatasetEntry>& entries, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> index;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const DatasetEntry& e = entries[i];
    std::string id = e.instance.id;
    if (id.empty()) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%s_%06zu", task_name(e.instance.task), i);
      id = buf;
    }
    const fs::path final_dir = dir / id;
    const fs::path tmp_dir = dir / (id + ".tmp");
    fs::remove_all(tmp_dir);
    fs::create_directories(tmp_dir);

    json meta = instance_to_json(e.instance);
    meta["id"] = id;
    meta["frame_count"] = e.frames.size();
    write_text_file(tmp_dir / "meta.json", meta.dump(2) + "\n");
    for (std::size_t f = 0; f < e.frames.size(); ++f) write_png(tmp_dir / frame_name(f), e.frames.frames[f]);

    fs::remove_all(final_dir);
    fs::rename(tmp_dir, final_dir);
    index.emplace_back(id, json{{"id", id}, {"task", task_name(e.instance.task)}, {"frames", e.frames.size()}}.dump());
  }
  // keep rows for instances already in the directory that were not rewritten
  if (fs::exists(dir / "index.jsonl")) {
    std::set<std::string> fresh;
    for (const auto& row : index) fresh.insert(row.first);
    std::istringstream in(read_text_file(dir / "index.jsonl"));
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      const std::string id = json::parse(line).at("id").get<std::string>();
      if (!fresh.count(id)) index.emplace_back(id, line);
    }
  }
  std::sort(index.begin(), index.end());
  std::string text;
  for (const auto& [id, line] : index) text += line + "\n";
  write_text_file(dir / "index.jsonl", text);
}

void write_instances(const std::vector<TaskInstance>& instances, const fs::path& dir) {
  std::vector<DatasetEntry> entries;
  entries.reserve(instances.size());
  for (const auto& inst : instances) entries.push_back({inst, render_trajectory(inst)});
  write_dataset(entries, dir);
}

std::vector<std::string> read_index(const fs::path& dir) {
  const fs::path index = dir / "index.jsonl";
  if (!fs::exists(index)) {
    throw Error(ErrorCode::SchemaVersionMismatch, "missing " + index.string());
  }
  std::vector<std::string> ids;
  std::istringstream in(read_text_file(index));
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    ids.push_back(json::parse(line).at("id").get<std::string>());
  }
  return ids;
}

FrameSequence read_frames(const fs::path& instance_dir) {
  FrameSequence seq;
  for (std::size_t f = 0;; ++f) {
    const fs::path p = instance_dir / frame_name(f);
    if (!fs::exists(p)) break;
    seq.frames.push_back(read_png(p));
  }
  return seq;
}

std::vector<DatasetEntry> read_dataset(const fs::path& dir) {
  std::vector<DatasetEntry> out;
  for (const std::string& id : read_index(dir)) {
    const fs::path inst_dir = dir / id;
    const fs::path meta_path = inst_dir / "meta.json";
    if (!fs::exists(meta_path)) {
      throw Error(ErrorCode::SchemaVersionMismatch, "missing " + meta_path.string());
    }
    json meta;
    try {
      meta = json::parse(read_text_file(meta_path));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaVersionMismatch, meta_path.string() + ": " + e.what());
    }
    DatasetEntry entry{instance_from_json(meta), read_frames(inst_dir)};
    const auto expected = meta.value("frame_count", std::size_t{0});
    std::size_t on_disk = 0;
    for (const auto& f : fs::directory_iterator(inst_dir)) {
      const auto name = f.path().filename().string();
      if (name.starts_with("frame_") && name.ends_with(".png")) ++on_disk;
    }
    if (on_disk != expected || entry.frames.size() != expected) {
      throw Error(ErrorCode::CorruptFrame, id + ": meta lists " + std::to_string(expected) +
                                               " frames, found " + std::to_string(on_disk));
    }
    for (const Frame& f : entry.frames.frames) {
      if (f.width != entry.frames.front().width || f.height != entry.frames.front().height) {
        throw Error(ErrorCode::CorruptFrame, id + ": frames differ in size");
      }
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace vrlvr
