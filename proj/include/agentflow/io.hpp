#pragma once

// Output formatting and run provenance. Machine-readable payloads use
// shortest round-trip decimal for doubles; human tables use 4 significant
// digits.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace agentflow {

inline constexpr const char* kToolName = "agentflow";
inline constexpr const char* kToolVersion = "0.1.0";

// Shortest decimal that parses back to exactly the same double.
inline std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

// Human-table formatting, 4 significant digits.
inline std::string format_sig4(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4g", value);
  return buffer;
}

// FNV-1a 64-bit digest, hex-encoded. Identifies input files in manifests.
inline std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

// Provenance of one CLI invocation. The timestamp is kept out of
// machine-readable payloads so identical runs stay byte-identical; it only
// appears in the human-facing log line.
struct RunManifest {
  std::string command;
  std::string input_path;
  std::string input_digest;  // fnv1a64 over the raw config bytes
  std::vector<std::pair<std::string, std::string>> parameters;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["input"] = input_path;
    j["input_digest"] = input_digest;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : parameters) params[key] = value;
    j["parameters"] = params;
    return j;
  }
};

}  // namespace agentflow
