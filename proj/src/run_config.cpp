#include "lgt/run_config.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lgt {

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> cmds = {
      "scan-plaquette", "fourier-fidelity", "sequence-fidelity",
      "l-opt",          "g-m",              "matter-scan",
      "torus-gen",      "export-operator",  "truncation-analysis"};
  return cmds;
}

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object())
    throw std::invalid_argument("config: top level must be an object");
  if (!doc.contains("command"))
    throw std::invalid_argument("config: missing field 'command'");
  if (!doc["command"].is_string())
    throw std::invalid_argument("config: field 'command' must be a string");
  RunConfig config;
  config.command = doc["command"].get<std::string>();
  const auto& cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), config.command) == cmds.end())
    throw std::invalid_argument("config: field 'command' has unknown value '" +
                                config.command + "'");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "command") config.options[it.key()] = it.value();
  return config;
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json doc = config.options;
  doc["command"] = config.command;
  return doc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override '" + assignment +
                                "' must look like key.path=value");
  std::string dotted = assignment.substr(0, eq);
  std::string raw = assignment.substr(eq + 1);
  if (dotted.empty())
    throw std::invalid_argument("override '" + assignment + "' has empty key");

  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::exception&) {
    value = raw;  // plain string
  }

  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    std::size_t stop = dotted.find('.', start);
    std::string key = dotted.substr(start, stop - start);
    if (key.empty())
      throw std::invalid_argument("override '" + assignment +
                                  "' has an empty path segment");
    if (stop == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    if (!node->contains(key) || !(*node)[key].is_object())
      (*node)[key] = nlohmann::json::object();
    node = &(*node)[key];
    start = stop + 1;
  }
}

nlohmann::json make_manifest(const RunConfig& config,
                             const std::map<std::string, double>& timings) {
  nlohmann::json manifest;
  manifest["config"] = to_json(config);
  manifest["versions"] = {
      {"tool", kToolVersion},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)}};
  nlohmann::json times = nlohmann::json::object();
  for (const auto& [name, seconds] : timings) times[name] = seconds;
  manifest["timings_seconds"] = times;

  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::snprintf(stamp, sizeof stamp, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  manifest["generated_at"] = stamp;
  return manifest;
}

void guard_overwrite(const std::filesystem::path& path, bool force) {
  if (!force && std::filesystem::exists(path))
    throw std::runtime_error("output file " + path.string() +
                             " exists; pass --force to overwrite");
}

}  // namespace lgt
