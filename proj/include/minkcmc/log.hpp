#pragma once

namespace minkcmc::logging {

enum class Level { kDebug = 0, kInfo, kWarn, kError, kOff };

// Parsed once from the MINKCMC_LOG environment variable
// (debug|info|warn|error|off); defaults to warn.
Level level();

void debug(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void info(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void warn(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void error(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

}  // namespace minkcmc::logging
