#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace calderon {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  int max_level = 3;        ///< finest corner level used by the suite
  std::uint64_t seed = 7;   ///< random test matrices
  int quad_n = 12;
};

/// Invariants of every module on small instances.
std::vector<CheckResult> run_invariant_suite(const VerifyOptions& options = {});

}  // namespace calderon
