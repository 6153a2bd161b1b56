#pragma once

#include <vector>

#include "cho/control_types.hpp"
#include "cho/forward.hpp"

namespace cho {

/// Discrete tracking cost: right-endpoint rectangle rule over n = 1..N for
/// the running terms, exact mass-matrix quadrature for the terminal terms.
double cost(const CoupledOperators& ops, const TimeGrid& grid, const CostSpec& spec,
            const StateTrajectory& trajectory, const ControlPair& u);

/// Derivative of the state part of the cost with respect to phi^n, as a
/// bulk-indexed dual vector, for n = 0..N (entry 0 has no terminal part and
/// is used only to extend the adjoint to t = 0).
std::vector<Vector> cost_state_sources(const CoupledOperators& ops, const TimeGrid& grid,
                                       const CostSpec& spec,
                                       const StateTrajectory& trajectory);

/// Running-cost source alpha1 M_b (phi - phi^Q) + alpha2 M_s (phi_G - phi^Sigma)
/// at time node n, without the dt weight.
Vector running_source(const CoupledOperators& ops, const CostSpec& spec, const Vector& phi,
                      int n);

/// Terminal source alpha3 M_b (phi - phi^Omega) + alpha4 M_s (phi_G - phi^Gamma).
Vector terminal_source(const CoupledOperators& ops, const CostSpec& spec, const Vector& phi);

/// Throws InvalidArgument when weights are negative or targets are mis-sized.
void check_cost_spec(const CoupledOperators& ops, const TimeGrid& grid, const CostSpec& spec);

}  // namespace cho
