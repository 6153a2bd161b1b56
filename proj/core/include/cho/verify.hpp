#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cho/config.hpp"

namespace cho {

struct CheckResult {
  std::string name;
  bool pass = false;
  /// Measured quantity and the bound it is compared against.
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::string config_name;
  std::vector<CheckResult> checks;

  bool pass() const;
};

/// Runs the invariant suite on one configuration: mean ODE, energy decay,
/// Taylor orders, adjoint duality, FD gradient, VI certificate, separation,
/// Yosida continuation and continuous dependence. A check that throws is
/// recorded as failed. When `artifact_dir` is nonempty the Taylor tables are
/// written there.
VerifyReport verify(const RunConfig& config, const std::string& artifact_dir = "");

void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace cho
