#pragma once

#include <string>
#include <vector>

namespace beamq::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

// Suites: "hermite", "coupling", "spin", "gaussian", or "all".
std::vector<CheckResult> run_suite(const std::string& suite);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace beamq::verify
