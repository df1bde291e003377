#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "comjac/real.hpp"

namespace comjac {

struct VerifyLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyLine> lines;
  bool all_pass = true;
};

/// Runs the invariant suites of every module on `samples` random
/// configurations at the given precision: conservation laws, the relative
/// momentum bounds, the A/K ranges, three-way determinant agreement, the
/// P1 = 1 identity, the finite-difference oracle and the special-ray checks.
VerifyReport run_verification(Precision precision_bits, long samples, std::uint64_t seed);

}  // namespace comjac
