#include "colex/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <memory>
#include <mutex>

namespace colex {

namespace {

LogLevel parse_env() {
  const char* env = std::getenv("EXPLORE_LOG");
  if (env == nullptr) return LogLevel::Off;
  const std::string v(env);
  if (v == "debug") return LogLevel::Debug;
  if (v == "info") return LogLevel::Info;
  return LogLevel::Off;
}

struct LogState {
  LogLevel level = parse_env();
  std::shared_ptr<spdlog::logger> sink = spdlog::stderr_color_mt("explore");
  LogState() { apply(); }
  void apply() {
    switch (level) {
      case LogLevel::Off: sink->set_level(spdlog::level::off); break;
      case LogLevel::Info: sink->set_level(spdlog::level::info); break;
      case LogLevel::Debug: sink->set_level(spdlog::level::debug); break;
    }
  }
};

LogState& state() {
  static LogState s;
  return s;
}

}  // namespace

LogLevel log_level() { return state().level; }

void set_log_level(LogLevel level) {
  state().level = level;
  state().apply();
}

void log_info(const std::string& message) { state().sink->info(message); }
void log_debug(const std::string& message) { state().sink->debug(message); }

}  // namespace colex
