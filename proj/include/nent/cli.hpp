// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nent::cli {

enum ExitCode : int {
  kOk = 0,
  kSelftestFailed = 1,
  kUsage = 2,
  kRangeRejected = 3,
  kUnrecoverable = 4,
  kMalformedFile = 5,
  kInfeasibleParams = 6,
};

/// measured / predicted redundancy op count above which `cost` flags a
/// disagreement with the closed-form bound.
inline constexpr double kCostDisagreementFactor = 1.5;

/// Entry point shared by the `nent` binary and the tests. `args` excludes
/// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nent::cli
