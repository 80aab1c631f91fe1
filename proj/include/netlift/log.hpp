#pragma once

#include <string_view>

namespace netlift {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Read once from NETLIFT_LOG (error|warn|info|debug); default warn.
LogLevel log_level();
void set_log_level(LogLevel level);

// One line to stderr, prefixed with the level. Thread-safe.
void log(LogLevel level, std::string_view msg);

}  // namespace netlift
