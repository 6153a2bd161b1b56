#pragma once

#include <vector>

#include "cho/control_types.hpp"
#include "cho/forward.hpp"
#include "cho/sensitivity.hpp"

namespace cho {

/// Adjoint states (p, p_G) and (q, q_G) on the N + 1 time nodes.
struct AdjointTrajectory {
  std::vector<PairField> p;
  std::vector<PairField> q;
};

/// Discrete adjoint: the exact transpose of the linearized step map against
/// the discrete cost, scaled so that
///   dJ(u)[h] = sum_n dt [ (gamma p^n + a5 u^n)^T M_b h^n
///                         + (gamma p_G^n + a6 u_G^n)^T M_G h_G^n ].
/// At the last node it satisfies
///   M (p + tau q)^N + dt (gamma M p^N + (K + Lambda) q^N)
///     = dt * running source + a3 M_b (phi^N - phi^Omega) + a4 M_s (...).
AdjointTrajectory adjoint_solve(const ForwardProblem& problem, const StateTrajectory& base,
                                const CostSpec& cost);

/// Same, reusing an existing linearization around `base`.
AdjointTrajectory adjoint_solve(const Linearization& linearization,
                                const StateTrajectory& base, const CostSpec& cost);

/// Implicit Euler applied directly to the continuous adjoint system
/// (optimize-then-discretize): terminal data M (p + tau q)^N equal to the
/// terminal source with K p^N = M q^N, then backward steps with
/// lambda = F''(phi^n). Used to cross-validate adjoint_solve.
AdjointTrajectory adjoint_continuous_form(const ForwardProblem& problem,
                                          const StateTrajectory& base, const CostSpec& cost);

/// Densities g = gamma p + a5 u and g_G = gamma p_G + a6 u_G on the control
/// slabs (slab k pairs with node k + 1).
ControlPair reduced_gradient(const ForwardProblem& problem, const ControlPair& u,
                             const AdjointTrajectory& adjoint, const CostSpec& cost);

/// dJ(u)[h] computed from a linearized trajectory for direction h.
double linearized_cost_derivative(const ForwardProblem& problem, const StateTrajectory& base,
                                  const ControlPair& u, const CostSpec& cost,
                                  const LinearizedTrajectory& linearized, const ControlPair& h);

}  // namespace cho
