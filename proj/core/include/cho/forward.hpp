#pragma once

#include <optional>
#include <vector>

#include "cho/common.hpp"
#include "cho/control_types.hpp"
#include "cho/mesh.hpp"
#include "cho/potentials.hpp"
#include "cho/spaces.hpp"
#include "cho/time_grid.hpp"

namespace cho {

enum class Scheme {
  /// F'(phi^{n+1})
  fully_implicit,
  /// beta(phi^{n+1}) + pi(phi^n)
  convex_splitting,
};

struct SolverOptions {
  Scheme scheme = Scheme::fully_implicit;
  /// Tolerance on the lumped-H dual norm of the coupled residual.
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  /// 0 disables Yosida regularization of beta.
  double eps_yosida = 0.0;
  /// Newton iterates for singular potentials stay in [-1 + d, 1 - d].
  double interior_safeguard = 1e-8;

  bool operator==(const SolverOptions&) const = default;
};

struct PhysicalParams {
  double tau = 1.0;
  double gamma = 1.0;

  bool operator==(const PhysicalParams&) const = default;
};

struct StateSnapshot {
  PairField phi;
  PairField mu;
};

struct StateTrajectory {
  TimeGrid grid;
  /// N + 1 snapshots; index 0 holds phi0 and the mu0 from the initial
  /// chemical-potential relation.
  std::vector<StateSnapshot> snapshots;
  /// Newton iterations and final residual per step (N entries).
  std::vector<int> newton_iterations;
  std::vector<double> residuals;

  int total_newton_iterations() const;
};

/// Everything the forward map needs besides the control.
struct ForwardProblem {
  BulkSurfaceMesh mesh;
  CoupledOperators ops;
  PotentialPair potentials;
  SolverOptions options;
  PhysicalParams params;
  TimeGrid grid;
  PairField phi0;

  ForwardProblem(BulkSurfaceMesh mesh, PotentialPair potentials, SolverOptions options,
                 PhysicalParams params, TimeGrid grid, const Vector& phi0_bulk);
};

struct StepResult {
  StateSnapshot state;
  int iterations = 0;
  double residual = 0.0;
};

/// One implicit Euler step of the coupled (phi, mu) system, solved by
/// Newton's method. Throws SolverError (step index -1) on non-convergence and
/// DomainError if an iterate leaves the domain of a singular potential.
StepResult step(const CoupledOperators& ops, const PotentialPair& pair,
                const SolverOptions& options, const StateSnapshot& state_n,
                const Vector& control_bulk, const Vector& control_boundary,
                const PhysicalParams& params, double dt);

/// mu0 solving  M mu0 = K phi0 + N(phi0).
Vector initial_chemical_potential(const CoupledOperators& ops, const PotentialPair& pair,
                                  const SolverOptions& options, const Vector& phi0);

/// Forward solve over the problem's grid. For singular potentials the
/// mean-value condition is validated first (ValidationError).
StateTrajectory solve(const ForwardProblem& problem, const ControlPair& controls);

/// Per-step residual of the discrete mean ODE
/// (m^{n+1} - m^n)/dt + gamma m^{n+1} - gamma omega^{n+1}.
std::vector<double> mean_ode_residual(const CoupledOperators& ops,
                                      const StateTrajectory& trajectory,
                                      const ControlPair& controls, double gamma);

/// Piecewise-constant function of time: value[k] on (breaks[k], breaks[k+1]].
struct PiecewiseConstant {
  std::vector<double> breaks;
  std::vector<double> values;
};

/// Extended mean of each control slab.
PiecewiseConstant control_mean(const CoupledOperators& ops, const TimeGrid& grid,
                               const ControlPair& controls);

/// m(t) = m0 e^{-gamma t} + gamma * int_0^t e^{-gamma (t-s)} omega(s) ds,
/// integrated exactly over the pieces.
double exact_mean(double m0, double gamma, const PiecewiseConstant& omega, double t);

/// 1/2 phi^T K phi + lumped-quadrature sum of F (bulk) and F_G (boundary);
/// beta_hat is replaced by its Yosida regularization when eps > 0.
double energy(const CoupledOperators& ops, const PotentialPair& pair, const PairField& phi,
              double eps = 0.0);

struct SeparationReport {
  enum class Status { pass, fail, not_applicable };
  Status status = Status::not_applicable;
  double worst_value = 0.0;
  int worst_step = -1;
  int worst_node = -1;
  bool worst_on_boundary = false;
};

/// Passes iff max |phi|, |phi_G| over all steps and nodes <= r0 + 1e-12.
/// A missing r0 means the potential is unbounded and the check is skipped.
SeparationReport separation_check(const StateTrajectory& trajectory, std::optional<double> r0);

/// sup norm of mu over the trajectory (bulk and boundary).
double mu_sup_norm(const StateTrajectory& trajectory);

struct ContinuationResult {
  std::vector<double> eps;
  std::vector<StateTrajectory> runs;
  /// L2(H) distance of phi^eps to the finest-eps run, one per coarser eps.
  std::vector<double> errors_vs_finest;
  /// Unregularized run, when the potential allows one without regularization
  /// (potentials defined on all of R).
  std::optional<StateTrajectory> reference;
  std::vector<double> errors_vs_reference;
};

/// Repeats the forward solve with beta replaced by beta_eps for each eps of a
/// strictly decreasing list in (0, 1).
ContinuationResult yosida_continuation(const ForwardProblem& problem,
                                       const ControlPair& controls,
                                       const std::vector<double>& eps_list);

}  // namespace cho
