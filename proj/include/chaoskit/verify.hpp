#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chaoskit {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct VerifyOptions {
  /// Directory of fixture kernels (*.json carrying "expected_moments");
  /// the built-in fixtures are used when unset.
  std::optional<std::string> fixture_dir;
  std::uint64_t seed = 20240601;
  int random_kernels = 12;
};

/// Runs the invariant suite. Each entry names one invariant or fixture value.
std::vector<CheckResult> run_verify_suite(const VerifyOptions& options = {});

/// Fixture kernels bundled with the library, as JSON documents.
std::vector<std::pair<std::string, std::string>> builtin_fixtures();

}  // namespace chaoskit
