// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/datasim/manifest.h"

#include <fstream>

#include <nlohmann/json.hpp>
#include "sdnet/errors.h"
#include "sdnet/fs.h"

namespace sdnet::datasim {

using nlohmann::json;

namespace {

json ToJson(const ManifestEntry &e) {
  json j;
  j["mixture_path"] = e.mixture_path;
  j["target_paths"] = e.target_paths;
  j["speaker_labels"] = e.speaker_labels;
  j["direction_labels"] = e.direction_labels;
  j["seed"] = e.seed;
  j["rt60"] = e.rt60;
  j["room_dims"] = e.room_dims;
  j["positions"] = e.positions;
  return j;
}

template <typename T>
T Field(const json &j, const char *name, std::size_t line) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw ParseError("manifest line " + std::to_string(line) +
                         ": missing field '" + name + "'",
                     line, name);
  }
  try {
    return it->get<T>();
  } catch (const json::exception &err) {
    throw ParseError("manifest line " + std::to_string(line) + ": field '" +
                         name + "' has the wrong type (" + err.what() + ")",
                     line, name);
  }
}

ManifestEntry FromJson(const json &j, std::size_t line) {
  if (!j.is_object()) {
    throw ParseError("manifest line " + std::to_string(line) + ": not a JSON object",
                     line);
  }
  ManifestEntry e;
  e.mixture_path = Field<std::string>(j, "mixture_path", line);
  e.target_paths = Field<std::vector<std::string>>(j, "target_paths", line);
  e.speaker_labels = Field<std::vector<int>>(j, "speaker_labels", line);
  e.direction_labels = Field<std::vector<int>>(j, "direction_labels", line);
  e.seed = Field<uint64_t>(j, "seed", line);
  e.rt60 = Field<double>(j, "rt60", line);
  e.room_dims = Field<Vec3>(j, "room_dims", line);
  e.positions = Field<std::vector<Vec3>>(j, "positions", line);
  const std::size_t n = e.target_paths.size();
  if (e.speaker_labels.size() != n || e.direction_labels.size() != n ||
      e.positions.size() != n) {
    throw ParseError("manifest line " + std::to_string(line) +
                         ": target_paths, labels and positions differ in length",
                     line, "target_paths");
  }
  return e;
}

}  // namespace

void WriteManifest(const std::filesystem::path &path,
                   std::span<const ManifestEntry> entries) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  for (const auto &e : entries) os << ToJson(e).dump() << '\n';
  if (!os) throw IoError("write failed: " + path.string());
}

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open manifest: " + path.string());
  std::vector<ManifestEntry> entries;
  std::string text;
  std::size_t line = 0;
  while (std::getline(is, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error &err) {
      throw ParseError("manifest line " + std::to_string(line) +
                           ": invalid JSON (" + err.what() + ")",
                       line);
    }
    entries.push_back(FromJson(j, line));
  }
  return entries;
}

ManifestEntry SaveExample(const MixtureExample &example,
                          const std::filesystem::path &dir,
                          const std::string &stem) {
  CreateDirectories(dir);
  ManifestEntry e;
  e.mixture_path = stem + ".mix.wav";
  WriteWav(dir / e.mixture_path, example.mixture);
  for (std::size_t i = 0; i < example.targets.size(); ++i) {
    e.target_paths.push_back(stem + ".s" + std::to_string(i) + ".wav");
    WriteWav(dir / e.target_paths.back(), example.targets[i]);
    e.positions.push_back(example.sources.at(i).position);
  }
  e.speaker_labels = example.speaker_labels;
  e.direction_labels = example.direction_labels;
  e.seed = example.seed;
  e.rt60 = example.room.rt60;
  e.room_dims = example.room.dims;
  return e;
}

std::filesystem::path ResolvePath(const std::filesystem::path &manifest,
                                  const std::string &entry_path) {
  std::filesystem::path p(entry_path);
  if (p.is_absolute()) return p;
  return manifest.parent_path() / p;
}

}  // namespace sdnet::datasim
