#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <utility>

#include <json.hpp>

namespace llema::log {

// Diagnostics are one JSON object per line: {"level": ..., "event": ..., ...}.
using Sink = std::function<void(const nlohmann::json&)>;

namespace detail {

inline std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

inline Sink& sink() {
  static Sink s = [](const nlohmann::json& line) { std::cerr << line.dump() << "\n"; };
  return s;
}

}  // namespace detail

// Returns the previous sink so tests can restore it.
inline Sink set_sink(Sink sink) {
  std::lock_guard lock(detail::sink_mutex());
  return std::exchange(detail::sink(), std::move(sink));
}

inline void emit(const char* level, const std::string& event, nlohmann::json fields = {}) {
  nlohmann::json line = {{"level", level}, {"event", event}};
  if (fields.is_object())
    for (auto& [k, v] : fields.items()) line[k] = v;
  std::lock_guard lock(detail::sink_mutex());
  if (detail::sink()) detail::sink()(line);
}

inline void warn(const std::string& event, nlohmann::json fields = {}) {
  emit("warning", event, std::move(fields));
}

inline void error(const std::string& event, nlohmann::json fields = {}) {
  emit("error", event, std::move(fields));
}

inline void info(const std::string& event, nlohmann::json fields = {}) {
  emit("info", event, std::move(fields));
}

}  // namespace llema::log
