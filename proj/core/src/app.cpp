#include "cho/app.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>

#include "cho/control.hpp"
#include "cho/io.hpp"

namespace cho {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
}

void write_control(const std::string& path, const TimeGrid& grid,
                   const std::vector<Vector>& slabs) {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < slabs.size(); ++k) {
    for (Eigen::Index i = 0; i < slabs[k].size(); ++i) {
      rows.push_back({grid.t(static_cast<int>(k) + 1), static_cast<double>(i), slabs[k][i]});
    }
  }
  write_csv(path, {{"t", "s"}, {"node", "-"}, {"value", "source"}}, rows);
}

}  // namespace

std::string run_directory(const RunConfig& config) {
  const std::filesystem::path dir = std::filesystem::path(config.output_dir) / config.name;
  std::filesystem::create_directories(dir);
  return dir.string();
}

std::string run_simulate(const RunConfig& config, std::ostream& log) {
  const ForwardProblem problem = build_problem(config);
  const ControlPair u = build_control(config, problem);
  validate_setup(problem, build_box(config, problem), u.sup_norm());
  log << problem.mesh.summary() << ", " << problem.grid.steps << " steps of " << problem.grid.dt()
      << "\n";

  const StateTrajectory traj = solve(problem, u);
  const std::string dir = run_directory(config);
  write_text(std::filesystem::path(dir) / "config.ini", serialize(config));

  const auto residual = mean_ode_residual(problem.ops, traj, u, problem.params.gamma);
  const auto omega = control_mean(problem.ops, problem.grid, u);
  const double m0 = mean(problem.ops, traj.snapshots[0].phi);
  std::vector<std::vector<double>> rows;
  for (std::size_t n = 0; n < traj.snapshots.size(); ++n) {
    const auto& s = traj.snapshots[n];
    const double t = problem.grid.t(static_cast<int>(n));
    rows.push_back({
        t,
        mean(problem.ops, s.phi),
        exact_mean(m0, problem.params.gamma, omega, t),
        n == 0 ? kNaN : residual[n - 1],
        energy(problem.ops, problem.potentials, s.phi, problem.options.eps_yosida),
        std::min(s.phi.bulk.minCoeff(), s.phi.boundary.minCoeff()),
        std::max(s.phi.bulk.maxCoeff(), s.phi.boundary.maxCoeff()),
        n == 0 ? 0.0 : static_cast<double>(traj.newton_iterations[n - 1]),
    });
    if (config.snapshot_stride > 0 && n % static_cast<std::size_t>(config.snapshot_stride) == 0) {
      write_snapshot(artifact_path(dir, "snapshot", static_cast<int>(n),
                                   problem.mesh.dim() == 1 ? "csv" : "vtk"),
                     problem.mesh, s, t);
    }
  }
  write_csv(artifact_path(dir, "timeseries", 0),
            {{"t", "s"},
             {"mean_phi", "-"},
             {"exact_mean", "-"},
             {"mean_residual", "1/s"},
             {"energy", "J"},
             {"phi_min", "-"},
             {"phi_max", "-"},
             {"newton_iterations", "count"}},
            rows);
  log << "newton iterations " << traj.total_newton_iterations() << ", output " << dir << "\n";
  return dir;
}

std::string run_optimize(const RunConfig& config, std::ostream& log) {
  const ForwardProblem problem = build_problem(config);
  const BoxBounds box = build_box(config, problem);
  validate_setup(problem, box, box.sup_bound());
  const CostSpec cost = build_cost(config, problem);
  const ControlPair u0 = project_box(build_control(config, problem), box);

  const auto result = projected_gradient(problem, cost, box, u0, config.optimizer);
  const std::string dir = run_directory(config);
  write_text(std::filesystem::path(dir) / "config.ini", serialize(config));

  std::vector<std::vector<double>> rows;
  for (const auto& r : result.history) {
    rows.push_back({static_cast<double>(r.iteration), r.cost, r.vi_residual, r.step,
                    static_cast<double>(r.newton_total), r.derivative_budget_ok ? 1.0 : 0.0});
  }
  write_csv(artifact_path(dir, "history", 0),
            {{"iteration", "count"},
             {"cost", "-"},
             {"vi_residual", "-"},
             {"step", "-"},
             {"newton_total", "count"},
             {"derivative_budget_ok", "bool"}},
            rows);
  write_control(artifact_path(dir, "control_bulk", 0), problem.grid, result.control.bulk);
  write_control(artifact_path(dir, "control_boundary", 0), problem.grid, result.control.boundary);
  const int last = problem.grid.steps;
  write_snapshot(artifact_path(dir, "snapshot", last, problem.mesh.dim() == 1 ? "csv" : "vtk"),
                 problem.mesh, result.state.snapshots.back(), problem.grid.t(last));

  const auto& final_record = result.history.back();
  log << (result.converged ? "converged" : "not converged") << " after " << result.iterations
      << " iterations, cost " << final_record.cost << ", vi residual " << final_record.vi_residual
      << ", output " << dir << "\n";
  return dir;
}

std::vector<VerifyReport> run_verify(const std::vector<RunConfig>& configs, std::ostream& log) {
  std::vector<VerifyReport> reports;
  for (const auto& config : configs) {
    const ForwardProblem problem = build_problem(config);
    const BoxBounds box = build_box(config, problem);
    validate_setup(problem, box, std::max(box.sup_bound(),
                                          build_control(config, problem).sup_norm()));
    reports.push_back(verify(config, run_directory(config)));
    print_report(log, reports.back());
  }
  if (reports.size() > 1) {
    log << "\nsummary\n";
    for (const auto& r : reports) {
      int failed = 0;
      for (const auto& c : r.checks) failed += c.pass ? 0 : 1;
      log << "  " << std::left << std::setw(16) << r.config_name << (r.pass() ? "PASS" : "FAIL")
          << "  " << r.checks.size() - failed << "/" << r.checks.size() << "\n";
    }
  }
  return reports;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return exit_config;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return exit_validation;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return exit_solver;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return exit_solver;
  }
}

}  // namespace cho
