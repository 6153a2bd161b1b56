#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "cho/config.hpp"
#include "cho/verify.hpp"

namespace cho {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  exit_ok = 0,
  exit_config = 1,
  exit_validation = 2,
  exit_solver = 3,
  /// A verify run finished with at least one failed check.
  exit_check_failed = 4,
};

/// `{output_dir}/{name}`, created on demand.
std::string run_directory(const RunConfig& config);

/// Forward solve. Writes config.ini, timeseries_0.csv and snapshot_k files.
/// Returns the output directory.
std::string run_simulate(const RunConfig& config, std::ostream& log);

/// Projected-gradient optimization from the projected configured control.
/// Writes config.ini, history_0.csv, control_bulk_0.csv,
/// control_boundary_0.csv and the final snapshot.
std::string run_optimize(const RunConfig& config, std::ostream& log);

/// Verify suite for each configuration followed by a summary table.
std::vector<VerifyReport> run_verify(const std::vector<RunConfig>& configs, std::ostream& log);

/// Runs `body` and maps exceptions to exit codes, printing the message to
/// `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace cho
