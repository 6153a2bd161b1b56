#include "cho/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <random>

#include "cho/adjoint.hpp"
#include "cho/cost.hpp"
#include "cho/io.hpp"
#include "cho/sensitivity.hpp"
#include "cho/time_norms.hpp"

namespace cho {

namespace {

constexpr double kMeanTol = 1e-9;
constexpr double kEnergySlack = 1e-12;
constexpr double kTaylorOrder = 1.9;
constexpr double kDualityTol = 1e-10;
constexpr double kGradientTol = 1e-6;
constexpr double kDependenceSpread = 0.2;
constexpr double kFdStep = 1e-4;
constexpr int kViSamples = 20;
/// Continuation errors below this are treated as converged.
constexpr double kRoundOff = 1e-13;

ControlPair random_direction(const ForwardProblem& p, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  ControlPair h = ControlPair::constant(p.ops.size(), p.ops.boundary_size(), p.grid.steps, 0, 0);
  for (auto& v : h.bulk) for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
  for (auto& v : h.boundary) for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
  return h;
}

ControlPair random_admissible(const BoxBounds& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  ControlPair v = box.lower;
  for (std::size_t k = 0; k < v.bulk.size(); ++k) {
    for (Eigen::Index i = 0; i < v.bulk[k].size(); ++i) {
      v.bulk[k][i] += dist(rng) * (box.upper.bulk[k][i] - box.lower.bulk[k][i]);
    }
    for (Eigen::Index i = 0; i < v.boundary[k].size(); ++i) {
      v.boundary[k][i] += dist(rng) * (box.upper.boundary[k][i] - box.lower.boundary[k][i]);
    }
  }
  return v;
}

CheckResult run_check(const std::string& name, const std::function<CheckResult()>& body) {
  try {
    CheckResult r = body();
    r.name = name;
    return r;
  } catch (const std::exception& e) {
    CheckResult r;
    r.name = name;
    r.pass = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.detail = e.what();
    return r;
  }
}

CheckResult at_most(double value, double threshold, std::string detail = "") {
  return CheckResult{"", value <= threshold, value, threshold, std::move(detail)};
}

CheckResult at_least(double value, double threshold, std::string detail = "") {
  return CheckResult{"", value >= threshold, value, threshold, std::move(detail)};
}

}  // namespace

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

VerifyReport verify(const RunConfig& config, const std::string& artifact_dir) {
  VerifyReport report;
  report.config_name = config.name;
  const ForwardProblem problem = build_problem(config);
  const ControlPair u = build_control(config, problem);
  const CostSpec cost_spec = build_cost(config, problem);
  const BoxBounds box = build_box(config, problem);
  const double R = config.neighborhood;
  std::mt19937_64 rng(config.verify.seed);
  auto& checks = report.checks;

  std::optional<StateTrajectory> base;
  checks.push_back(run_check("mean_ode", [&] {
    base = solve(problem, u);
    const auto r = mean_ode_residual(problem.ops, *base, u, problem.params.gamma);
    double worst = 0.0;
    for (double v : r) worst = std::max(worst, std::abs(v));
    return at_most(worst, kMeanTol, "max per-step residual");
  }));

  checks.push_back(run_check("energy_decay", [&] {
    ForwardProblem p = problem;
    p.params.gamma = 0.0;
    p.options.scheme = Scheme::convex_splitting;
    p.grid = TimeGrid(problem.grid.dt() * config.verify.energy_steps, config.verify.energy_steps);
    const ControlPair zero =
        ControlPair::constant(p.ops.size(), p.ops.boundary_size(), p.grid.steps, 0.0, 0.0);
    const auto traj = solve(p, zero);
    double worst = -std::numeric_limits<double>::infinity();
    double previous = energy(p.ops, p.potentials, traj.snapshots[0].phi);
    for (std::size_t n = 1; n < traj.snapshots.size(); ++n) {
      const double e = energy(p.ops, p.potentials, traj.snapshots[n].phi);
      worst = std::max(worst, e - previous);
      previous = e;
    }
    return at_most(worst, kEnergySlack, "max energy increase per step");
  }));

  checks.push_back(run_check("taylor", [&] {
    double worst = std::numeric_limits<double>::infinity();
    int exact = 0;
    for (int d = 0; d < config.verify.taylor_directions; ++d) {
      const ControlPair h = random_direction(problem, rng, R);
      const auto t = taylor_test(problem, u, h, {1.0, 0.5, 0.25, 0.125});
      if (!artifact_dir.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < t.scales.size(); ++k) {
          rows.push_back({t.scales[k], t.remainders[k],
                          k == 0 ? std::numeric_limits<double>::quiet_NaN() : t.orders[k - 1]});
        }
        write_csv(artifact_path(artifact_dir, "taylor", d),
                  {{"s", "-"}, {"remainder", "Y-norm"}, {"order", "-"}}, rows);
      }
      if (t.exact) {
        ++exact;
        continue;
      }
      for (double o : t.orders) worst = std::min(worst, o);
    }
    if (exact == config.verify.taylor_directions) {
      return CheckResult{"", true, 0.0, kTaylorOrder, "remainders at round-off (affine map)"};
    }
    return at_least(worst, kTaylorOrder, "min observed order");
  }));

  checks.push_back(run_check("adjoint_duality", [&] {
    if (!base) base = solve(problem, u);
    const Linearization lin(problem, *base);
    const auto g = reduced_gradient(problem, u, adjoint_solve(lin, *base, cost_spec), cost_spec);
    double worst = 0.0;
    for (int d = 0; d < config.verify.gradient_directions; ++d) {
      const ControlPair h = random_direction(problem, rng, 1.0);
      const double adj = control_inner(problem.ops, problem.grid, g, h);
      const double direct = linearized_cost_derivative(problem, *base, u, cost_spec, lin.solve(h), h);
      worst = std::max(worst, std::abs(adj - direct) / std::max(1.0, std::abs(direct)));
    }
    return at_most(worst, kDualityTol, "max relative gap");
  }));

  checks.push_back(run_check("fd_gradient", [&] {
    ForwardProblem p = problem;
    p.options.newton_tol = std::min(p.options.newton_tol, 1e-13);
    const auto traj = solve(p, u);
    const auto g = reduced_gradient(p, u, adjoint_solve(p, traj, cost_spec), cost_spec);
    auto j = [&](const ControlPair& v) { return cost(p.ops, p.grid, cost_spec, solve(p, v), v); };
    double worst = 0.0;
    for (int d = 0; d < config.verify.gradient_directions; ++d) {
      const ControlPair h = random_direction(p, rng, 1.0);
      ControlPair plus = u, minus = u;
      plus.axpy(kFdStep, h);
      minus.axpy(-kFdStep, h);
      const double fd = (j(plus) - j(minus)) / (2.0 * kFdStep);
      const double adj = control_inner(p.ops, p.grid, g, h);
      worst = std::max(worst, std::abs(adj - fd) / std::max(std::abs(fd), 1e-300));
    }
    return at_most(worst, kGradientTol, "max relative error");
  }));

  checks.push_back(run_check("vi_certificate", [&] {
    const auto result = projected_gradient(problem, cost_spec, box, project_box(u, box),
                                           config.optimizer);
    const double tol = config.optimizer.tol;
    bool monotone = true;
    for (std::size_t k = 1; k < result.history.size(); ++k) {
      monotone = monotone && result.history[k].cost <= result.history[k - 1].cost;
    }
    double worst_form = std::numeric_limits<double>::infinity();
    for (int s = 0; s < kViSamples; ++s) {
      const ControlPair v = random_admissible(box, rng);
      worst_form =
          std::min(worst_form, vi_form(problem.ops, problem.grid, result.control, result.gradient, v));
    }
    const double residual = result.history.back().vi_residual;
    CheckResult r = at_most(residual, tol,
                            "vi residual after " + std::to_string(result.iterations) +
                                " iterations; min sampled form " + std::to_string(worst_form));
    r.pass = r.pass && result.converged && monotone && worst_form >= -10.0 * tol;
    return r;
  }));

  checks.push_back(run_check("separation", [&] {
    if (!base) base = solve(problem, u);
    const double n_bound = mu_sup_norm(*base);
    const double phi0_sup = std::max(problem.phi0.bulk.cwiseAbs().maxCoeff(),
                                     problem.phi0.boundary.cwiseAbs().maxCoeff());
    const auto r0 = problem.options.eps_yosida == 0.0
                        ? separation_r0(problem.potentials, n_bound, phi0_sup)
                        : std::nullopt;
    const auto rep = separation_check(*base, r0);
    if (rep.status == SeparationReport::Status::not_applicable) {
      return CheckResult{"", true, std::abs(rep.worst_value), 0.0, "not applicable"};
    }
    return CheckResult{"", rep.status == SeparationReport::Status::pass,
                       std::abs(rep.worst_value), *r0,
                       "max |phi| at step " + std::to_string(rep.worst_step) + " node " +
                           std::to_string(rep.worst_node) + ", N = " + std::to_string(n_bound)};
  }));

  checks.push_back(run_check("yosida_continuation", [&] {
    const auto c = yosida_continuation(problem, u, config.verify.eps_list);
    const auto& errors = c.reference ? c.errors_vs_reference : c.errors_vs_finest;
    bool decreasing = true;
    for (std::size_t k = 1; k < errors.size(); ++k) {
      decreasing = decreasing && (errors[k] < errors[k - 1] || errors[k] <= kRoundOff);
    }
    const double last = errors.empty() ? 0.0 : errors.back();
    CheckResult r{"", decreasing, last, 0.0,
                  c.reference ? "error vs unregularized run, finest eps"
                              : "error vs finest eps, second finest eps"};
    return r;
  }));

  checks.push_back(run_check("continuous_dependence", [&] {
    const ControlPair h = random_direction(problem, rng, R);
    const auto d = continuous_dependence(problem, u, h, config.verify.dependence_scales);
    return at_most(d.spread, kDependenceSpread, "relative spread of the Lipschitz ratios");
  }));

  return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
  out << "verify " << report.config_name << "\n";
  for (const auto& c : report.checks) {
    out << "  " << std::left << std::setw(24) << c.name << (c.pass ? "PASS" : "FAIL") << "  "
        << std::setprecision(4) << std::scientific << c.value << " (bound " << c.threshold << ")"
        << std::defaultfloat;
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
  }
}

}  // namespace cho
