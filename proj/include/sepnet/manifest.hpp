#pragma once

// Run manifest: enough to rerun a command and get the same bytes back.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sepnet {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct InputFile {
  std::string path;
  std::uint64_t bytes = 0;
  /// FNV-1a 64 of the file content, hex.
  std::string fnv1a;

  friend bool operator==(const InputFile&, const InputFile&) = default;
};

struct RunManifest {
  std::string command;
  std::vector<InputFile> inputs;
  std::map<std::string, std::string> flags;
  std::uint64_t seed = 0;
  std::string tool_version{kToolVersion};
  /// UTC, ISO 8601. The only field allowed to differ between reruns.
  std::string timestamp;
  std::vector<std::string> outputs;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void to_json(nlohmann::ordered_json& j, const InputFile& f) {
  j = nlohmann::ordered_json{{"path", f.path}, {"bytes", f.bytes}, {"fnv1a", f.fnv1a}};
}
inline void from_json(const nlohmann::ordered_json& j, InputFile& f) {
  j.at("path").get_to(f.path);
  j.at("bytes").get_to(f.bytes);
  j.at("fnv1a").get_to(f.fnv1a);
}

inline void to_json(nlohmann::ordered_json& j, const RunManifest& m) {
  j = nlohmann::ordered_json{{"command", m.command},   {"inputs", m.inputs},       {"flags", m.flags},
                             {"seed", m.seed},         {"tool_version", m.tool_version},
                             {"timestamp", m.timestamp}, {"outputs", m.outputs}};
}
inline void from_json(const nlohmann::ordered_json& j, RunManifest& m) {
  j.at("command").get_to(m.command);
  j.at("inputs").get_to(m.inputs);
  j.at("flags").get_to(m.flags);
  j.at("seed").get_to(m.seed);
  j.at("tool_version").get_to(m.tool_version);
  j.at("timestamp").get_to(m.timestamp);
  j.at("outputs").get_to(m.outputs);
}

inline std::string manifest_to_json(const RunManifest& m) { return nlohmann::ordered_json(m).dump(2) + "\n"; }

inline RunManifest manifest_from_json(std::string_view text) {
  return nlohmann::ordered_json::parse(text).get<RunManifest>();
}

}  // namespace sepnet
