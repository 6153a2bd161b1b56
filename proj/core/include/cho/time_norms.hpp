#pragma once

#include <vector>

#include "cho/control_types.hpp"
#include "cho/spaces.hpp"
#include "cho/time_grid.hpp"

namespace cho {

struct StateTrajectory;

/// Discrete L2(0,T; H) norm with right-endpoint weights (n = 1..N).
double l2_H(const CoupledOperators& ops, const TimeGrid& grid,
            const std::vector<PairField>& series);

/// Discrete norm of H1(0,T; H) intersected with Linf(0,T; V):
/// the H1(H) norm from values and difference quotients, plus the max over
/// time nodes of the V norm.
double y_norm(const CoupledOperators& ops, const TimeGrid& grid,
              const std::vector<PairField>& series);

/// phi snapshots of a trajectory.
std::vector<PairField> phi_series(const StateTrajectory& trajectory);

/// a - b elementwise; sizes must match.
std::vector<PairField> difference(const std::vector<PairField>& a,
                                  const std::vector<PairField>& b);

/// L2(0,T; H) inner product of piecewise-constant controls.
double control_inner(const CoupledOperators& ops, const TimeGrid& grid, const ControlPair& a,
                     const ControlPair& b);
double control_norm(const CoupledOperators& ops, const TimeGrid& grid, const ControlPair& a);

}  // namespace cho
