#pragma once

#include <sstream>
#include <string>

namespace lucid::log {

enum class Level { kQuiet = 0, kInfo = 1, kDebug = 2 };

/// Read once from LUCID_LOG (quiet | info | debug); defaults to quiet.
Level level();
void set_level(Level level);

void write(Level at, const std::string& message);

template <typename... Args>
void info(const Args&... args) {
  if (level() < Level::kInfo) return;
  std::ostringstream os;
  (os << ... << args);
  write(Level::kInfo, os.str());
}

template <typename... Args>
void debug(const Args&... args) {
  if (level() < Level::kDebug) return;
  std::ostringstream os;
  (os << ... << args);
  write(Level::kDebug, os.str());
}

}  // namespace lucid::log
