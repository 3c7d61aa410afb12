// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_DATASIM_MANIFEST_H_
#define SDNET_DATASIM_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sdnet/datasim/geometry.h"
#include "sdnet/datasim/mixture.h"

namespace sdnet::datasim {

// One line of a JSON-lines manifest. Audio paths are stored as written and
// resolved against the manifest's directory when relative.
struct ManifestEntry {
  std::string mixture_path;
  std::vector<std::string> target_paths;
  std::vector<int> speaker_labels;
  std::vector<int> direction_labels;
  uint64_t seed = 0;
  double rt60 = 0.0;
  Vec3 room_dims{};
  std::vector<Vec3> positions;

  bool operator==(const ManifestEntry &) const = default;
};

void WriteManifest(const std::filesystem::path &path,
                   std::span<const ManifestEntry> entries);
// Throws ParseError carrying the 1-based line number and the offending field.
std::vector<ManifestEntry> ReadManifest(const std::filesystem::path &path);

// Writes <stem>.mix.wav and <stem>.s<i>.wav under `dir` and returns the
// entry with paths relative to `dir`.
ManifestEntry SaveExample(const MixtureExample &example,
                          const std::filesystem::path &dir,
                          const std::string &stem);

std::filesystem::path ResolvePath(const std::filesystem::path &manifest,
                                  const std::string &entry_path);

}  // namespace sdnet::datasim

#endif  // SDNET_DATASIM_MANIFEST_H_
