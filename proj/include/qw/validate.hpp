#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qw {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  bool informational = false;  // reported, never counted as a failure
  std::string detail;
  double seconds = 0;
};

struct ValidateOptions {
  std::uint64_t seed = 12345;
  bool quick = false;  // smaller sizes
};

std::vector<CheckResult> run_invariant_suite(const ValidateOptions& opts);

}  // namespace qw
