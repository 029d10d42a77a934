#ifndef MORALLEX_UTIL_LOG_HPP
#define MORALLEX_UTIL_LOG_HPP

#include <string>

namespace morallex::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3, Silent = 4 };

// Global threshold; messages below it are dropped. Not thread-synchronized
// beyond what stderr gives us; callers that need ordered logs run single
// threaded.
void set_level(Level level);
Level level();
Level parse_level(const std::string& name);  // "debug"|"info"|"warn"|"error"|"silent"

void debug(const std::string& msg);
void info(const std::string& msg);
void warn(const std::string& msg);
void error(const std::string& msg);

}  // namespace morallex::log

#endif
