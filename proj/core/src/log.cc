// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/log.h"

#include <spdlog/spdlog.h>

namespace sdnet::log {

namespace {

spdlog::level::level_enum ToSpd(Level level) {
  switch (level) {
    case Level::kDebug: return spdlog::level::debug;
    case Level::kInfo: return spdlog::level::info;
    case Level::kWarn: return spdlog::level::warn;
    case Level::kError: return spdlog::level::err;
    case Level::kOff: return spdlog::level::off;
  }
  return spdlog::level::info;
}

}  // namespace

void SetLevel(Level level) { spdlog::set_level(ToSpd(level)); }

void Write(Level level, std::string_view message) {
  spdlog::log(ToSpd(level), "{}", message);
}

}  // namespace sdnet::log
