#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>

namespace chaoskit {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kCsvSchemaVersion = 1;

/// Everything needed to reproduce one CLI output.
struct RunManifest {
  std::string command;
  std::string kernel_source;  // file path or "family:<name>:<parameter>"
  std::string model;
  std::string mode;
  std::optional<std::uint64_t> seed;
  nlohmann::json parameters = nlohmann::json::object();
  std::string timestamp;  // UTC, ISO 8601
};

/// Library and toolchain versions.
nlohmann::json version_info();

/// SOURCE_DATE_EPOCH when set (reproducible builds convention), else now.
std::string manifest_timestamp();

nlohmann::json to_json(const RunManifest& manifest);

/// Leading comment lines of every CSV output: schema version and manifest.
void write_csv_preamble(std::ostream& out, const RunManifest& manifest);

}  // namespace chaoskit
