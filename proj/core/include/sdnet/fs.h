// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_FS_H_
#define SDNET_FS_H_

#include <filesystem>
#include <system_error>

#include "sdnet/errors.h"

namespace sdnet {

// create_directories that reports failures as IoError.
inline void CreateDirectories(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

inline void EnsureParentDir(const std::filesystem::path &path) {
  if (path.has_parent_path()) CreateDirectories(path.parent_path());
}

}  // namespace sdnet

#endif  // SDNET_FS_H_
