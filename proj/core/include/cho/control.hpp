#pragma once

#include <string>
#include <vector>

#include "cho/adjoint.hpp"
#include "cho/control_types.hpp"
#include "cho/cost.hpp"
#include "cho/forward.hpp"

namespace cho {

/// Componentwise clamp into the box.
ControlPair project_box(const ControlPair& u, const BoxBounds& box);

struct AdmissibilityReport {
  bool box_ok = true;
  bool derivative_ok = true;
  double derivative_norm_bulk = 0.0;
  double derivative_norm_boundary = 0.0;
  /// Names the violated constraint(s); empty when admissible.
  std::string binding;

  bool pass() const noexcept { return box_ok && derivative_ok; }
};

/// Box membership and the discrete H1-in-time budget
/// ||d_t u||_{L2(H)} <= M' from slab difference quotients.
AdmissibilityReport validate_admissible(const CoupledOperators& ops, const TimeGrid& grid,
                                        const ControlPair& u, const BoxBounds& box);

/// || u - P_box(u - g) ||_{L2(H)}; zero iff the box-constrained first-order
/// condition holds.
double vi_residual(const CoupledOperators& ops, const TimeGrid& grid, const ControlPair& u,
                   const ControlPair& g, const BoxBounds& box);

/// Discrete form  int_Q g (v - u) + int_Sigma g_G (v_G - u_G)  of the
/// variational inequality.
double vi_form(const CoupledOperators& ops, const TimeGrid& grid, const ControlPair& u,
               const ControlPair& g, const ControlPair& v);

/// Cost and gradient at u (one forward and one adjoint solve).
struct Evaluation {
  StateTrajectory state;
  double cost = 0.0;
  ControlPair gradient;
};

Evaluation evaluate(const ForwardProblem& problem, const CostSpec& cost, const ControlPair& u);

struct OptimizerOptions {
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
  int max_iter = 200;
  int max_backtracks = 60;
  double tol = 1e-6;
  /// Barzilai-Borwein trial step instead of the fixed initial step.
  bool bb_warm_start = false;

  bool operator==(const OptimizerOptions&) const = default;
};

struct OptimizerRecord {
  int iteration = 0;
  double cost = 0.0;
  double vi_residual = 0.0;
  double step = 0.0;
  int newton_total = 0;
  bool derivative_budget_ok = true;
};

struct OptimizationResult {
  ControlPair control;
  StateTrajectory state;
  ControlPair gradient;
  std::vector<OptimizerRecord> history;
  bool converged = false;
  int iterations = 0;
};

/// Thrown when Armijo backtracking fails.
class LineSearchError : public SolverError {
 public:
  LineSearchError(const std::string& what, int iteration, double gradient_norm)
      : SolverError(what, iteration, gradient_norm) {}
  double gradient_norm() const noexcept { return residual(); }
};

/// Projected gradient descent u_{k+1} = P_box(u_k - s_k g_k) with Armijo
/// backtracking on the discrete cost. Stops when vi_residual <= tol.
OptimizationResult projected_gradient(const ForwardProblem& problem, const CostSpec& cost,
                                      const BoxBounds& box, const ControlPair& u0,
                                      const OptimizerOptions& options = {});

}  // namespace cho
