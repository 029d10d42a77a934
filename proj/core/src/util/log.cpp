#include "morallex/util/log.hpp"

#include <cstdio>
#include <stdexcept>

namespace morallex::log {

namespace {
Level g_level = Level::Warn;

void emit(const char* tag, const std::string& msg) {
  std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}
}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

Level parse_level(const std::string& name) {
  if (name == "debug") return Level::Debug;
  if (name == "info") return Level::Info;
  if (name == "warn") return Level::Warn;
  if (name == "error") return Level::Error;
  if (name == "silent") return Level::Silent;
  throw std::invalid_argument("log: unknown level '" + name + "'");
}

void debug(const std::string& msg) {
  if (g_level <= Level::Debug) emit("debug", msg);
}
void info(const std::string& msg) {
  if (g_level <= Level::Info) emit("info", msg);
}
void warn(const std::string& msg) {
  if (g_level <= Level::Warn) emit("warn", msg);
}
void error(const std::string& msg) {
  if (g_level <= Level::Error) emit("error", msg);
}

}  // namespace morallex::log
