// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_LOG_H_
#define SDNET_LOG_H_

#include <sstream>
#include <string>
#include <string_view>

namespace sdnet::log {

enum class Level { kDebug, kInfo, kWarn, kError, kOff };

void SetLevel(Level level);
void Write(Level level, std::string_view message);

// Streams all arguments into one message.
template <typename... Args>
std::string Cat(const Args &...args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

template <typename... Args>
void Info(const Args &...args) { Write(Level::kInfo, Cat(args...)); }
template <typename... Args>
void Warn(const Args &...args) { Write(Level::kWarn, Cat(args...)); }
template <typename... Args>
void Error(const Args &...args) { Write(Level::kError, Cat(args...)); }

}  // namespace sdnet::log

#endif  // SDNET_LOG_H_
