#include "minkcmc/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace minkcmc::logging {

Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("MINKCMC_LOG");
    if (!env) return Level::kWarn;
    if (std::strcmp(env, "debug") == 0) return Level::kDebug;
    if (std::strcmp(env, "info") == 0) return Level::kInfo;
    if (std::strcmp(env, "warn") == 0) return Level::kWarn;
    if (std::strcmp(env, "error") == 0) return Level::kError;
    if (std::strcmp(env, "off") == 0) return Level::kOff;
    return Level::kWarn;
  }();
  return lvl;
}

namespace {
void emit(Level lvl, const char* tag, const char* fmt, va_list args) {
  if (lvl < level()) return;
  std::fprintf(stderr, "[%s] ", tag);
  std::vfprintf(stderr, fmt, args);
  std::fputc('\n', stderr);
}
}  // namespace

#define MINKCMC_LOG_IMPL(fn, lvl, tag)            \
  void fn(const char* fmt, ...) {                 \
    va_list args;                                 \
    va_start(args, fmt);                          \
    emit(lvl, tag, fmt, args);                    \
    va_end(args);                                 \
  }

MINKCMC_LOG_IMPL(debug, Level::kDebug, "debug")
MINKCMC_LOG_IMPL(info, Level::kInfo, "info")
MINKCMC_LOG_IMPL(warn, Level::kWarn, "warn")
MINKCMC_LOG_IMPL(error, Level::kError, "error")

#undef MINKCMC_LOG_IMPL

}  // namespace minkcmc::logging
