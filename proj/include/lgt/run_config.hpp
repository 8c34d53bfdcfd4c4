#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace lgt {

inline constexpr const char* kToolVersion = "0.1.0";

/// A run is described by a command name plus a nested options document.
/// Precedence when assembling the document: built-in defaults, then the
/// config file, then dotted command-line overrides (flags win).
struct RunConfig {
  std::string command;
  nlohmann::json options = nlohmann::json::object();
};

/// Commands the front end accepts, in display order.
const std::vector<std::string>& known_commands();

/// Validates and splits a raw document {"command": ..., everything else}.
/// Throws std::invalid_argument naming the offending field path.
RunConfig parse_config(const nlohmann::json& doc);

nlohmann::json to_json(const RunConfig& config);

/// Reads and parses a config file (JSON).  Throws std::runtime_error on I/O
/// failure and std::invalid_argument on malformed content.
RunConfig load_config(const std::filesystem::path& path);

/// Applies a `dotted.path=value` override, creating intermediate objects.
/// The value is parsed as JSON when possible (numbers, booleans, arrays),
/// otherwise kept as a string.  Throws std::invalid_argument for a missing
/// '=' or an empty key.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Looks up a dotted path; returns `fallback` when absent.
template <typename T>
T config_get(const nlohmann::json& doc, const std::string& dotted,
             const T& fallback) {
  const nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    std::size_t stop = dotted.find('.', start);
    std::string key = dotted.substr(start, stop - start);
    if (!node->is_object() || !node->contains(key)) return fallback;
    node = &(*node)[key];
    if (stop == std::string::npos) break;
    start = stop + 1;
  }
  try {
    return node->get<T>();
  } catch (const nlohmann::json::exception&) {
    return fallback;
  }
}

/// Manifest describing one run: config echo, component versions, wall-clock
/// timings (seconds) and an ISO-8601 start stamp.
nlohmann::json make_manifest(const RunConfig& config,
                             const std::map<std::string, double>& timings);

/// Refuses to clobber an existing file unless `force` is set.
void guard_overwrite(const std::filesystem::path& path, bool force);

}  // namespace lgt
