#ifndef COURTPRIOR_LOG_HPP
#define COURTPRIOR_LOG_HPP

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace courtprior {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Level from COURT_PRIOR_LOG (error|warn|info|debug); defaults to info.
inline LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("COURT_PRIOR_LOG");
    if (!env) return LogLevel::Info;
    const std::string s = env;
    if (s == "error") return LogLevel::Error;
    if (s == "warn") return LogLevel::Warn;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Info;
  }();
  return level;
}

/// Structured progress lines go to stderr only; data belongs in files.
inline void log_line(LogLevel level, const std::string& msg) {
  if (level > log_threshold()) return;
  static std::mutex mu;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
}

inline void log_error(const std::string& msg) { log_line(LogLevel::Error, msg); }
inline void log_warn(const std::string& msg) { log_line(LogLevel::Warn, msg); }
inline void log_info(const std::string& msg) { log_line(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log_line(LogLevel::Debug, msg); }

} // namespace courtprior

#endif
