#include "cho/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/SparseCholesky>

#include "cho/time_norms.hpp"
#include "step_system.hpp"

namespace cho {

namespace {

constexpr int kMaxHalvings = 30;

// Largest alpha in (0, 1] keeping phi + alpha * d inside [-1 + delta, 1 - delta].
double interior_step(const Vector& phi, const Vector& d, double delta) {
  double alpha = 1.0;
  const double edge = 1.0 - delta;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    if (d[i] > 0.0 && phi[i] + d[i] > edge) {
      alpha = std::min(alpha, (edge - phi[i]) / d[i]);
    } else if (d[i] < 0.0 && phi[i] + d[i] < -edge) {
      alpha = std::min(alpha, (-edge - phi[i]) / d[i]);
    }
  }
  return std::max(alpha, 0.0);
}

void require_interior(const Vector& phi, const PotentialPair& pair) {
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    if (!pair.bulk.in_domain(phi[i]) || !pair.boundary.in_domain(phi[i])) {
      throw DomainError("state outside the potential domain at node " + std::to_string(i),
                        phi[i], i);
    }
  }
}

}  // namespace

int StateTrajectory::total_newton_iterations() const {
  return std::accumulate(newton_iterations.begin(), newton_iterations.end(), 0);
}

ForwardProblem::ForwardProblem(BulkSurfaceMesh mesh_, PotentialPair potentials_,
                               SolverOptions options_, PhysicalParams params_, TimeGrid grid_,
                               const Vector& phi0_bulk)
    : mesh(std::move(mesh_)),
      ops(assemble(mesh)),
      potentials(std::move(potentials_)),
      options(options_),
      params(params_),
      grid(grid_),
      phi0(make_conforming(mesh, phi0_bulk)) {
  if (!(params.tau > 0.0)) throw InvalidArgument("viscosity tau must be positive");
  if (params.gamma < 0.0) throw InvalidArgument("reaction rate gamma must be nonnegative");
  if (!(options.newton_tol > 0.0) || options.newton_max_iter < 1 ||
      !(options.interior_safeguard > 0.0)) {
    throw InvalidArgument("solver tolerances must be positive");
  }
}

StepResult step(const CoupledOperators& ops, const PotentialPair& pair,
                const SolverOptions& options, const StateSnapshot& state_n,
                const Vector& control_bulk, const Vector& control_boundary,
                const PhysicalParams& params, double dt) {
  const detail::StepSystem system(ops, pair, options, params, dt);
  const Eigen::Index n = ops.size();
  const Vector& phi_old = state_n.phi.bulk;
  const Vector f = system.source(control_bulk, control_boundary);

  Vector phi = phi_old;
  Vector mu = state_n.mu.bulk;
  Vector r = system.residual(phi, mu, phi_old, f);
  double norm = system.dual_norm(r);

  detail::SparseLU lu;
  int it = 0;
  for (; norm > options.newton_tol; ++it) {
    if (it == options.newton_max_iter) {
      throw SolverError("Newton did not converge, residual " + std::to_string(norm), -1, norm);
    }
    detail::factorize(lu, system.jacobian(system.implicit_diagonal(phi)), -1);
    const Vector d = lu.solve(-r);
    if (!d.allFinite()) throw SolverError("Newton update is not finite", -1, norm);

    double alpha = 1.0;
    if (system.bounded()) alpha = interior_step(phi, d.head(n), options.interior_safeguard);

    Vector trial_phi = phi + alpha * d.head(n);
    Vector trial_mu = mu + alpha * d.tail(n);
    Vector trial_r = system.residual(trial_phi, trial_mu, phi_old, f);
    double trial_norm = system.dual_norm(trial_r);
    for (int h = 0; h < kMaxHalvings && !(trial_norm <= norm); ++h) {
      alpha *= 0.5;
      trial_phi = phi + alpha * d.head(n);
      trial_mu = mu + alpha * d.tail(n);
      trial_r = system.residual(trial_phi, trial_mu, phi_old, f);
      trial_norm = system.dual_norm(trial_r);
    }
    phi = std::move(trial_phi);
    mu = std::move(trial_mu);
    r = std::move(trial_r);
    norm = trial_norm;
  }

  StepResult result;
  result.state.phi = ops.conforming(std::move(phi));
  result.state.mu = ops.conforming(std::move(mu));
  result.iterations = it;
  result.residual = norm;
  return result;
}

Vector initial_chemical_potential(const CoupledOperators& ops, const PotentialPair& pair,
                                  const SolverOptions& options, const Vector& phi0) {
  const detail::StepSystem system(ops, pair, options, PhysicalParams{}, 1.0);
  const Vector rhs = ops.stiffness * phi0 + system.full_force(phi0);
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(ops.mass);
  if (ldlt.info() != Eigen::Success) throw SolverError("mass matrix factorization failed", 0, 0.0);
  return ldlt.solve(rhs);
}

StateTrajectory solve(const ForwardProblem& problem, const ControlPair& controls) {
  const auto& ops = problem.ops;
  const auto& grid = problem.grid;
  check_control_shape(ops, controls, grid.steps);
  if (!controls.finite()) throw InvalidArgument("controls contain non-finite values");

  const bool singular = problem.options.eps_yosida == 0.0 &&
                        (problem.potentials.bulk.bounded_domain() ||
                         problem.potentials.boundary.bounded_domain());
  if (singular) {
    require_interior(problem.phi0.bulk, problem.potentials);
    if (problem.params.gamma > 0.0) {
      const auto report = check_mean_value_condition(
          problem.potentials, mean(ops, problem.phi0), controls.sup_norm(), problem.params.gamma);
      if (!report.pass) {
        throw ValidationError("mean-value condition violated: endpoint " +
                              std::to_string(*report.violated_endpoint) +
                              " is outside int D(beta_Gamma)");
      }
    }
  }

  StateTrajectory trajectory;
  trajectory.grid = grid;
  trajectory.snapshots.reserve(grid.steps + 1);
  StateSnapshot initial;
  initial.phi = problem.phi0;
  initial.mu = ops.conforming(
      initial_chemical_potential(ops, problem.potentials, problem.options, problem.phi0.bulk));
  trajectory.snapshots.push_back(std::move(initial));

  for (int k = 0; k < grid.steps; ++k) {
    try {
      StepResult r = step(ops, problem.potentials, problem.options, trajectory.snapshots.back(),
                          controls.bulk[k], controls.boundary[k], problem.params, grid.dt());
      trajectory.newton_iterations.push_back(r.iterations);
      trajectory.residuals.push_back(r.residual);
      trajectory.snapshots.push_back(std::move(r.state));
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " at step " + std::to_string(k + 1), k + 1,
                        e.residual());
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at step " + std::to_string(k + 1), e.value(),
                        e.node());
    }
  }
  return trajectory;
}

std::vector<double> mean_ode_residual(const CoupledOperators& ops,
                                      const StateTrajectory& trajectory,
                                      const ControlPair& controls, double gamma) {
  const TimeGrid& grid = trajectory.grid;
  check_control_shape(ops, controls, grid.steps);
  const double dt = grid.dt();
  std::vector<double> out(grid.steps);
  double m_prev = mean(ops, trajectory.snapshots[0].phi);
  for (int k = 0; k < grid.steps; ++k) {
    const double m_next = mean(ops, trajectory.snapshots[k + 1].phi);
    const double omega = mean(ops, PairField{controls.bulk[k], controls.boundary[k]});
    out[k] = (m_next - m_prev) / dt + gamma * m_next - gamma * omega;
    m_prev = m_next;
  }
  return out;
}

PiecewiseConstant control_mean(const CoupledOperators& ops, const TimeGrid& grid,
                               const ControlPair& controls) {
  check_control_shape(ops, controls, grid.steps);
  PiecewiseConstant omega;
  for (int k = 0; k <= grid.steps; ++k) omega.breaks.push_back(grid.t(k));
  for (int k = 0; k < grid.steps; ++k) {
    omega.values.push_back(mean(ops, PairField{controls.bulk[k], controls.boundary[k]}));
  }
  return omega;
}

double exact_mean(double m0, double gamma, const PiecewiseConstant& omega, double t) {
  if (!(gamma > 0.0)) throw InvalidArgument("exact mean needs gamma > 0");
  if (omega.breaks.size() != omega.values.size() + 1) {
    throw InvalidArgument("piecewise-constant function needs one more break than values");
  }
  double m = m0 * std::exp(-gamma * t);
  for (std::size_t k = 0; k < omega.values.size(); ++k) {
    const double a = omega.breaks[k];
    const double b = std::min(omega.breaks[k + 1], t);
    if (b <= a) break;
    // gamma * int_a^b e^{-gamma (t - s)} ds
    m += omega.values[k] * (std::exp(-gamma * (t - b)) - std::exp(-gamma * (t - a)));
  }
  return m;
}

double energy(const CoupledOperators& ops, const PotentialPair& pair, const PairField& phi,
              double eps) {
  if (phi.bulk.size() != ops.size()) throw InvalidArgument("energy: size mismatch");
  const EffectivePotential bulk(pair.bulk, eps);
  const EffectivePotential boundary(pair.boundary, eps);
  double e = 0.5 * phi.bulk.dot(ops.stiffness * phi.bulk);
  for (Eigen::Index i = 0; i < phi.bulk.size(); ++i) {
    const double r = phi.bulk[i];
    e += ops.lumped_bulk[i] * bulk.value(r);
    if (ops.lumped_surface[i] != 0.0) e += ops.lumped_surface[i] * boundary.value(r);
  }
  return e;
}

SeparationReport separation_check(const StateTrajectory& trajectory, std::optional<double> r0) {
  SeparationReport report;
  for (std::size_t k = 0; k < trajectory.snapshots.size(); ++k) {
    const PairField& phi = trajectory.snapshots[k].phi;
    for (Eigen::Index i = 0; i < phi.bulk.size(); ++i) {
      if (std::abs(phi.bulk[i]) > std::abs(report.worst_value) || report.worst_step < 0) {
        report.worst_value = phi.bulk[i];
        report.worst_step = static_cast<int>(k);
        report.worst_node = static_cast<int>(i);
        report.worst_on_boundary = false;
      }
    }
    for (Eigen::Index i = 0; i < phi.boundary.size(); ++i) {
      if (std::abs(phi.boundary[i]) > std::abs(report.worst_value)) {
        report.worst_value = phi.boundary[i];
        report.worst_step = static_cast<int>(k);
        report.worst_node = static_cast<int>(i);
        report.worst_on_boundary = true;
      }
    }
  }
  if (!r0) {
    report.status = SeparationReport::Status::not_applicable;
  } else {
    report.status = std::abs(report.worst_value) <= *r0 + 1e-12
                        ? SeparationReport::Status::pass
                        : SeparationReport::Status::fail;
  }
  return report;
}

double mu_sup_norm(const StateTrajectory& trajectory) {
  double m = 0.0;
  for (const auto& s : trajectory.snapshots) {
    m = std::max({m, s.mu.bulk.cwiseAbs().maxCoeff(),
                  s.mu.boundary.size() ? s.mu.boundary.cwiseAbs().maxCoeff() : 0.0});
  }
  return m;
}

ContinuationResult yosida_continuation(const ForwardProblem& problem,
                                       const ControlPair& controls,
                                       const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw InvalidArgument("Yosida continuation needs at least one eps");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0 && eps_list[k] < 1.0)) {
      throw InvalidArgument("Yosida parameters must lie in (0, 1)");
    }
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) {
      throw InvalidArgument("Yosida parameters must be strictly decreasing");
    }
  }

  ContinuationResult result;
  result.eps = eps_list;
  for (double eps : eps_list) {
    ForwardProblem regularized = problem;
    regularized.options.eps_yosida = eps;
    result.runs.push_back(solve(regularized, controls));
  }

  const auto finest = phi_series(result.runs.back());
  for (std::size_t k = 0; k + 1 < result.runs.size(); ++k) {
    result.errors_vs_finest.push_back(
        l2_H(problem.ops, problem.grid, difference(phi_series(result.runs[k]), finest)));
  }

  if (!problem.potentials.bulk.bounded_domain() && !problem.potentials.boundary.bounded_domain()) {
    ForwardProblem plain = problem;
    plain.options.eps_yosida = 0.0;
    result.reference = solve(plain, controls);
    const auto exact = phi_series(*result.reference);
    for (const auto& run : result.runs) {
      result.errors_vs_reference.push_back(
          l2_H(problem.ops, problem.grid, difference(phi_series(run), exact)));
    }
  }
  return result;
}

}  // namespace cho
