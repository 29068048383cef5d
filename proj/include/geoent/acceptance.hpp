#pragma once

// Self-verification suite shared by the acceptance test binary and
// `geoent verify`.

#include <cstdint>
#include <string>
#include <vector>

namespace geoent {

struct Metric {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;

  bool ok() const { return worst <= tolerance; }
};

struct CheckResult {
  int number = 0;
  std::string id;
  std::string title;
  std::vector<Metric> metrics;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 = unlimited
  bool passed = false;
  std::string detail;
};

struct VerifyConfig {
  /// Random-sample count for every sampled check; 0 keeps each check's default.
  int samples = 0;
  std::uint64_t seed = 42;
  int restarts = 50;
  int grid_n = 200;
  int partial_grid_n = 100;
};

struct CheckInfo {
  std::string id;
  std::string title;
};

const std::vector<CheckInfo>& check_catalog();

/// Throws std::invalid_argument for an unknown id or a negative sample count.
CheckResult run_check(const std::string& id, const VerifyConfig& cfg);

/// Runs `only` (all checks when empty) in catalog order.
std::vector<CheckResult> run_checks(const VerifyConfig& cfg, const std::vector<std::string>& only = {});

/// One line: status, number, id, metrics, timing.
std::string format_check(const CheckResult& r);

}  // namespace geoent
