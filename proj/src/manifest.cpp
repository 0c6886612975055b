#include "chaoskit/manifest.hpp"

#include <gmp.h>

#include <Eigen/Core>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <ostream>
#include <string>

#include "chaoskit/errors.hpp"

namespace chaoskit {

nlohmann::json version_info() {
  return {{"chaoskit", kVersion},
          {"gmp", gmp_version},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"compiler", __VERSION__}};
}

std::string manifest_timestamp() {
  std::time_t t{};
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (*end != '\0' || v < 0) throw InputError("SOURCE_DATE_EPOCH must be a non-negative integer");
    t = static_cast<std::time_t>(v);
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

nlohmann::json to_json(const RunManifest& manifest) {
  nlohmann::json doc{{"command", manifest.command},
                     {"kernel_source", manifest.kernel_source},
                     {"model", manifest.model},
                     {"mode", manifest.mode},
                     {"seed", nullptr},
                     {"parameters", manifest.parameters},
                     {"versions", version_info()},
                     {"timestamp", manifest.timestamp}};
  if (manifest.seed) doc["seed"] = *manifest.seed;
  return doc;
}

void write_csv_preamble(std::ostream& out, const RunManifest& manifest) {
  out << "# schema: chaoskit-csv/" << kCsvSchemaVersion << '\n';
  out << "# manifest: " << to_json(manifest).dump() << '\n';
}

}  // namespace chaoskit
