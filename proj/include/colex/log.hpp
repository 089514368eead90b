#pragma once

#include <string>

namespace colex {

enum class LogLevel { Off, Info, Debug };

// Verbosity comes from EXPLORE_LOG (off|info|debug, default off) on first use.
// Messages go to standard error only.
LogLevel log_level();
void set_log_level(LogLevel level);
void log_info(const std::string& message);
void log_debug(const std::string& message);

}  // namespace colex
