#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rtrack {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct AcceptanceReport {
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }
};

/// Runs every acceptance check against the two built-in scenarios; all
/// thresholds are fixed here, not configurable.
AcceptanceReport run_acceptance();

/// One `PASS`/`FAIL` line per check plus an overall verdict.
void print_report(const AcceptanceReport& report, std::ostream& out);

}  // namespace rtrack
