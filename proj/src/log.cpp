#include "gvc/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace gvc::log {

namespace {

Level parse_env() {
  const char* raw = std::getenv("GVC_LOG");
  if (raw == nullptr) return Level::kWarn;
  const std::string value(raw);
  if (value == "debug") return Level::kDebug;
  if (value == "info") return Level::kInfo;
  if (value == "warn") return Level::kWarn;
  if (value == "error") return Level::kError;
  if (value == "off") return Level::kOff;
  return Level::kWarn;
}

Level g_threshold = parse_env();
std::mutex g_mutex;

const char* tag(Level level) {
  switch (level) {
    case Level::kDebug: return "debug";
    case Level::kInfo: return "info";
    case Level::kWarn: return "warn";
    case Level::kError: return "error";
    default: return "?";
  }
}

}  // namespace

Level threshold() { return g_threshold; }

void set_threshold(Level level) { g_threshold = level; }

void write(Level level, const std::string& message) {
  if (level < g_threshold) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[gvc:" << tag(level) << "] " << message << '\n';
}

}  // namespace gvc::log
