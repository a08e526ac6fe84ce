#include "core/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string_view>

namespace lucid::log {
namespace {

Level from_env() {
  const char* v = std::getenv("LUCID_LOG");
  if (v == nullptr) return Level::kQuiet;
  std::string_view s(v);
  if (s == "debug") return Level::kDebug;
  if (s == "info") return Level::kInfo;
  return Level::kQuiet;
}

std::atomic<int>& current() {
  static std::atomic<int> lvl{static_cast<int>(from_env())};
  return lvl;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Level level() { return static_cast<Level>(current().load(std::memory_order_relaxed)); }

void set_level(Level level) { current().store(static_cast<int>(level)); }

void write(Level at, const std::string& message) {
  std::lock_guard lock(sink_mutex());
  std::cerr << (at == Level::kDebug ? "[debug] " : "[info] ") << message << '\n';
}

}  // namespace lucid::log
