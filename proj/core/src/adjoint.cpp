#include "cho/adjoint.hpp"

#include <Eigen/SparseCholesky>

#include "cho/cost.hpp"
#include "step_system.hpp"

namespace cho {

AdjointTrajectory adjoint_solve(const Linearization& linearization,
                                const StateTrajectory& base, const CostSpec& cost) {
  const ForwardProblem& problem = linearization.problem();
  const auto& ops = problem.ops;
  const double dt = problem.grid.dt();
  const Eigen::Index n = ops.size();

  const auto lambda =
      linearization.transpose_solve(cost_state_sources(ops, problem.grid, cost, base));
  AdjointTrajectory out;
  for (const Vector& l : lambda) {
    out.p.push_back(ops.conforming(l.head(n) / dt));
    out.q.push_back(ops.conforming(l.tail(n) / dt));
  }
  return out;
}

AdjointTrajectory adjoint_solve(const ForwardProblem& problem, const StateTrajectory& base,
                                const CostSpec& cost) {
  return adjoint_solve(Linearization(problem, base), base, cost);
}

AdjointTrajectory adjoint_continuous_form(const ForwardProblem& problem,
                                          const StateTrajectory& base, const CostSpec& cost) {
  const auto& ops = problem.ops;
  const auto& grid = problem.grid;
  const double dt = grid.dt();
  const double tau = problem.params.tau;
  const double gamma = problem.params.gamma;
  const Eigen::Index n = ops.size();
  check_cost_spec(ops, grid, cost);
  if (static_cast<int>(base.snapshots.size()) != grid.steps + 1) {
    throw InvalidArgument("base trajectory does not match the problem's time grid");
  }

  AdjointTrajectory out;
  out.p.resize(grid.steps + 1);
  out.q.resize(grid.steps + 1);

  // Terminal node: M (p + tau q) = zeta_T and K p = M q, i.e. (M + tau K) p = zeta_T.
  const Vector zeta_T = terminal_source(ops, cost, base.snapshots.back().phi.bulk);
  SparseMatrix terminal = ops.mass + tau * ops.stiffness;
  Eigen::SimplicialLDLT<SparseMatrix> terminal_solver(terminal);
  Eigen::SimplicialLDLT<SparseMatrix> mass_solver(ops.mass);
  if (terminal_solver.info() != Eigen::Success || mass_solver.info() != Eigen::Success) {
    throw SolverError("terminal adjoint system is singular", grid.steps, 0.0);
  }
  Vector p = terminal_solver.solve(zeta_T);
  Vector q = mass_solver.solve(ops.stiffness * p);
  out.p[grid.steps] = ops.conforming(p);
  out.q[grid.steps] = ops.conforming(q);

  const detail::StepSystem system(ops, problem.potentials, problem.options, problem.params, dt);
  detail::SparseLU lu;
  Vector rhs(2 * n);
  for (int k = grid.steps - 1; k >= 0; --k) {
    const Vector& phi = base.snapshots[k].phi.bulk;
    SparseMatrix a12 = tau * ops.mass + dt * ops.stiffness;
    SparseMatrix lambda(n, n);
    const Vector weights = system.second_derivative_diagonal(phi);
    lambda.reserve(Eigen::VectorXi::Constant(n, 1));
    for (Eigen::Index i = 0; i < n; ++i) lambda.insert(i, i) = dt * weights[i];
    a12 += lambda;
    const SparseMatrix a11 = (1.0 + gamma * dt) * ops.mass;
    const SparseMatrix a22 = -ops.mass;
    detail::factorize(lu, detail::block_matrix(a11, a12, ops.stiffness, a22), k);
    rhs.head(n) = ops.mass * (p + tau * q) + dt * running_source(ops, cost, phi, k);
    rhs.tail(n).setZero();
    const Vector x = lu.solve(rhs);
    p = x.head(n);
    q = x.tail(n);
    out.p[k] = ops.conforming(p);
    out.q[k] = ops.conforming(q);
  }
  return out;
}

ControlPair reduced_gradient(const ForwardProblem& problem, const ControlPair& u,
                             const AdjointTrajectory& adjoint, const CostSpec& cost) {
  const int steps = problem.grid.steps;
  check_control_shape(problem.ops, u, steps);
  if (static_cast<int>(adjoint.p.size()) != steps + 1) {
    throw InvalidArgument("adjoint trajectory does not match the control slabs");
  }
  const double gamma = problem.params.gamma;
  ControlPair g = u;
  for (int k = 0; k < steps; ++k) {
    g.bulk[k] = gamma * adjoint.p[k + 1].bulk + cost.weight(5) * u.bulk[k];
    g.boundary[k] = gamma * adjoint.p[k + 1].boundary + cost.weight(6) * u.boundary[k];
  }
  return g;
}

double linearized_cost_derivative(const ForwardProblem& problem, const StateTrajectory& base,
                                  const ControlPair& u, const CostSpec& cost,
                                  const LinearizedTrajectory& linearized, const ControlPair& h) {
  const auto& ops = problem.ops;
  const auto& grid = problem.grid;
  check_control_shape(ops, u, grid.steps);
  check_control_shape(ops, h, grid.steps);
  const auto sources = cost_state_sources(ops, grid, cost, base);
  double d = 0.0;
  for (int k = 1; k <= grid.steps; ++k) d += sources[k].dot(linearized.psi[k].bulk);
  for (int k = 0; k < grid.steps; ++k) {
    d += grid.dt() * (cost.weight(5) * u.bulk[k].dot(ops.mass_bulk * h.bulk[k]) +
                      cost.weight(6) * u.boundary[k].dot(ops.mass_boundary * h.boundary[k]));
  }
  return d;
}

}  // namespace cho
