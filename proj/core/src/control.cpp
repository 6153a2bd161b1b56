#include "cho/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cho/time_norms.hpp"

namespace cho {

namespace {

void check_box(const CoupledOperators& ops, const TimeGrid& grid, const BoxBounds& box) {
  check_control_shape(ops, box.lower, grid.steps);
  check_control_shape(ops, box.upper, grid.steps);
}

double difference_quotient_norm(const std::vector<Vector>& slabs, const SparseMatrix& mass,
                                double dt) {
  double s = 0.0;
  for (std::size_t k = 1; k < slabs.size(); ++k) {
    const Vector rate = (slabs[k] - slabs[k - 1]) / dt;
    s += dt * rate.dot(mass * rate);
  }
  return std::sqrt(s);
}

}  // namespace

ControlPair project_box(const ControlPair& u, const BoxBounds& box) {
  if (u.bulk.size() != box.lower.bulk.size() || u.boundary.size() != box.lower.boundary.size()) {
    throw InvalidArgument("control and box have different slab counts");
  }
  ControlPair out = u;
  for (std::size_t k = 0; k < u.bulk.size(); ++k) {
    out.bulk[k] = u.bulk[k].cwiseMax(box.lower.bulk[k]).cwiseMin(box.upper.bulk[k]);
  }
  for (std::size_t k = 0; k < u.boundary.size(); ++k) {
    out.boundary[k] =
        u.boundary[k].cwiseMax(box.lower.boundary[k]).cwiseMin(box.upper.boundary[k]);
  }
  return out;
}

AdmissibilityReport validate_admissible(const CoupledOperators& ops, const TimeGrid& grid,
                                        const ControlPair& u, const BoxBounds& box) {
  check_control_shape(ops, u, grid.steps);
  check_box(ops, grid, box);
  AdmissibilityReport report;
  for (int k = 0; k < grid.steps && report.box_ok; ++k) {
    report.box_ok = (u.bulk[k].array() >= box.lower.bulk[k].array()).all() &&
                    (u.bulk[k].array() <= box.upper.bulk[k].array()).all() &&
                    (u.boundary[k].array() >= box.lower.boundary[k].array()).all() &&
                    (u.boundary[k].array() <= box.upper.boundary[k].array()).all();
  }
  report.derivative_norm_bulk = difference_quotient_norm(u.bulk, ops.mass_bulk, grid.dt());
  report.derivative_norm_boundary =
      difference_quotient_norm(u.boundary, ops.mass_boundary, grid.dt());
  report.derivative_ok = report.derivative_norm_bulk <= box.derivative_budget &&
                         report.derivative_norm_boundary <= box.derivative_budget;
  if (!report.box_ok) report.binding = "box";
  if (!report.derivative_ok) {
    report.binding += report.binding.empty() ? "derivative-budget" : "+derivative-budget";
  }
  return report;
}

double vi_residual(const CoupledOperators& ops, const TimeGrid& grid, const ControlPair& u,
                   const ControlPair& g, const BoxBounds& box) {
  ControlPair trial = u;
  trial.axpy(-1.0, g);
  return control_norm(ops, grid, u - project_box(trial, box));
}

double vi_form(const CoupledOperators& ops, const TimeGrid& grid, const ControlPair& u,
               const ControlPair& g, const ControlPair& v) {
  return control_inner(ops, grid, g, v - u);
}

Evaluation evaluate(const ForwardProblem& problem, const CostSpec& spec, const ControlPair& u) {
  Evaluation e;
  e.state = solve(problem, u);
  e.cost = cost(problem.ops, problem.grid, spec, e.state, u);
  const AdjointTrajectory adjoint = adjoint_solve(problem, e.state, spec);
  e.gradient = reduced_gradient(problem, u, adjoint, spec);
  return e;
}

OptimizationResult projected_gradient(const ForwardProblem& problem, const CostSpec& spec,
                                      const BoxBounds& box, const ControlPair& u0,
                                      const OptimizerOptions& options) {
  const auto& ops = problem.ops;
  const auto& grid = problem.grid;
  check_box(ops, grid, box);
  check_control_shape(ops, u0, grid.steps);
  if (!box.consistent()) throw ValidationError("infeasible box: lower bound exceeds upper bound");
  if (!(options.armijo_c1 > 0.0 && options.armijo_c1 < 1.0) ||
      !(options.backtrack > 0.0 && options.backtrack < 1.0) || !(options.initial_step > 0.0) ||
      !(options.tol >= 0.0) || options.max_iter < 0) {
    throw InvalidArgument("invalid optimizer options");
  }
  if (problem.options.eps_yosida == 0.0 && problem.potentials.boundary.bounded_domain() &&
      problem.params.gamma > 0.0) {
    const auto report = check_mean_value_condition(problem.potentials, mean(ops, problem.phi0),
                                                   box.sup_bound(), problem.params.gamma);
    if (!report.pass) {
      throw ValidationError("mean-value condition violated for the box bound M");
    }
  }

  OptimizationResult result;
  result.control = project_box(u0, box);
  Evaluation current = evaluate(problem, spec, result.control);
  double residual = vi_residual(ops, grid, result.control, current.gradient, box);
  auto record = [&](int it, double step) {
    OptimizerRecord r;
    r.iteration = it;
    r.cost = current.cost;
    r.vi_residual = residual;
    r.step = step;
    r.newton_total = current.state.total_newton_iterations();
    r.derivative_budget_ok = validate_admissible(ops, grid, result.control, box).derivative_ok;
    result.history.push_back(r);
  };
  record(0, 0.0);

  ControlPair previous_u, previous_g;
  int it = 0;
  while (residual > options.tol && it < options.max_iter) {
    double step = options.initial_step;
    if (options.bb_warm_start && it > 0) {
      const ControlPair du = result.control - previous_u;
      const ControlPair dg = current.gradient - previous_g;
      const double sy = control_inner(ops, grid, du, dg);
      const double yy = control_inner(ops, grid, dg, dg);
      if (sy > 0.0 && yy > 0.0) step = std::clamp(sy / yy, 1e-8, 1e8);
    }

    bool accepted = false;
    for (int b = 0; b <= options.max_backtracks; ++b, step *= options.backtrack) {
      ControlPair trial = result.control;
      trial.axpy(-step, current.gradient);
      trial = project_box(trial, box);
      const ControlPair move = trial - result.control;
      const double decrease = control_inner(ops, grid, current.gradient, move);
      StateTrajectory state;
      try {
        state = solve(problem, trial);
      } catch (const SolverError&) {
        continue;
      } catch (const DomainError&) {
        continue;
      }
      const double trial_cost = cost(ops, grid, spec, state, trial);
      if (trial_cost <= current.cost + options.armijo_c1 * decrease) {
        previous_u = std::move(result.control);
        previous_g = std::move(current.gradient);
        result.control = std::move(trial);
        current.state = std::move(state);
        current.cost = trial_cost;
        current.gradient = reduced_gradient(
            problem, result.control, adjoint_solve(problem, current.state, spec), spec);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      const double gnorm = control_norm(ops, grid, current.gradient);
      throw LineSearchError("line search failed at iteration " + std::to_string(it + 1) +
                                ", gradient norm " + std::to_string(gnorm),
                            it + 1, gnorm);
    }
    ++it;
    residual = vi_residual(ops, grid, result.control, current.gradient, box);
    record(it, step);
  }

  result.converged = residual <= options.tol;
  result.iterations = it;
  result.state = std::move(current.state);
  result.gradient = std::move(current.gradient);
  return result;
}

}  // namespace cho
