#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cho/forward.hpp"
#include "cho/time_norms.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace cho {
namespace {

using testing::log_pair;
using testing::regular_pair;
using testing::small_problem;

ForwardProblem constant_problem(PotentialPair pair, double a, double T, int steps,
                                double gamma, double tau = 1.0) {
  BulkSurfaceMesh mesh = build_interval(4, 1.0);
  return ForwardProblem(mesh, std::move(pair), SolverOptions{}, PhysicalParams{tau, gamma},
                        TimeGrid(T, steps), Vector::Constant(5, a));
}

TEST(Forward, ProblemValidation) {
  auto mesh = build_interval(4, 1.0);
  EXPECT_THROW(ForwardProblem(mesh, regular_pair(), SolverOptions{}, PhysicalParams{0.0, 1.0},
                              TimeGrid(1.0, 4), Vector::Zero(5)),
               InvalidArgument);
  SolverOptions bad;
  bad.newton_tol = 0.0;
  EXPECT_THROW(ForwardProblem(mesh, regular_pair(), bad, PhysicalParams{}, TimeGrid(1.0, 4),
                              Vector::Zero(5)),
               InvalidArgument);
  EXPECT_THROW(TimeGrid(1.0, 0), InvalidArgument);
  EXPECT_THROW(TimeGrid(0.0, 3), InvalidArgument);
  EXPECT_DOUBLE_EQ(TimeGrid(1.0, 4).dt(), 0.25);
}

TEST(Forward, ConstantStateStep) {
  for (const auto& pair : {regular_pair(), log_pair()}) {
    const auto ops = assemble(build_interval(4, 1.0));
    StateSnapshot s;
    s.phi = ops.conforming(Vector::Constant(5, 0.5));
    s.mu = ops.conforming(Vector::Zero(5));
    const auto r = step(ops, pair, SolverOptions{}, s, Vector::Zero(5), Vector::Zero(2),
                        PhysicalParams{1.0, 1.0}, 0.1);
    for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(r.state.phi.bulk[i], 0.5 / 1.1, 1e-12);
    EXPECT_LE(r.residual, 1e-10);
  }
}

TEST(Forward, ZeroDataStaysZero) {
  const auto p = constant_problem(regular_pair(), 0.0, 1.0, 10, 1.0);
  const auto u = ControlPair::constant(5, 2, 10, 0.0, 0.0);
  const auto traj = solve(p, u);
  for (const auto& s : traj.snapshots) {
    EXPECT_EQ(s.phi.bulk.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.mu.bulk.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Forward, InitialSnapshotAndMu) {
  const auto p = small_problem();
  const auto u = testing::smooth_control(p);
  const auto traj = solve(p, u);
  ASSERT_EQ(traj.snapshots.size(), 21u);
  EXPECT_EQ(traj.snapshots[0].phi.bulk, p.phi0.bulk);
  EXPECT_EQ(traj.snapshots[0].phi.boundary, p.phi0.boundary);
  // mu0 satisfies M mu0 = K phi0 + N(phi0) with lumped N.
  const Vector& phi0 = p.phi0.bulk;
  Vector n(phi0.size());
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    n[i] = p.ops.lumped_bulk[i] * p.potentials.bulk.eval(phi0[i], 1) +
           p.ops.lumped_surface[i] * p.potentials.boundary.eval(phi0[i], 1);
  }
  const Vector r = p.ops.mass * traj.snapshots[0].mu.bulk - p.ops.stiffness * phi0 - n;
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-12);
  for (const auto& s : traj.snapshots) {
    EXPECT_TRUE(is_conforming(p.mesh, s.phi));
    EXPECT_TRUE(is_conforming(p.mesh, s.mu));
  }
  for (double res : traj.residuals) EXPECT_LE(res, 1e-10);
}

TEST(Forward, ConstantDataMatchesRecursionAndOde) {
  const double a = 0.5, b = 1.0, gamma = 2.0, T = 1.0;
  const double exact = a * std::exp(-gamma * T) + b * (1.0 - std::exp(-gamma * T));
  std::vector<double> errors;
  for (int steps : {20, 40, 80}) {
    const auto p = constant_problem(regular_pair(), a, T, steps, gamma);
    const auto traj = solve(p, ControlPair::constant(5, 2, steps, b, b));
    const double recursion = oracle::constant_state_recursion(a, b, gamma, T / steps, steps);
    for (const auto& s : traj.snapshots) {
      EXPECT_NEAR(s.phi.bulk.maxCoeff(), s.phi.bulk.minCoeff(), 1e-12);
    }
    EXPECT_NEAR(traj.snapshots.back().phi.bulk[2], recursion, 1e-12);
    errors.push_back(std::abs(traj.snapshots.back().phi.bulk[2] - exact));
  }
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const double ratio = errors[k] / errors[k + 1];
    EXPECT_GE(ratio, 1.7);
    EXPECT_LE(ratio, 2.3);
  }
}

TEST(Forward, MeanOdeResidualVanishes) {
  std::mt19937_64 rng(1);
  for (Scheme scheme : {Scheme::fully_implicit, Scheme::convex_splitting}) {
    const auto p = small_problem(regular_pair(), 16, 20, 0.2, scheme);
    const auto u = testing::random_control(p, rng, 0.5);
    const auto traj = solve(p, u);
    const double tol = 10.0 * p.options.newton_tol / (p.ops.volume + p.ops.surface);
    for (double r : mean_ode_residual(p.ops, traj, u, p.params.gamma)) {
      EXPECT_LE(std::abs(r), tol);
    }
  }
  const auto p2 = testing::small_problem_2d();
  const auto u2 = ControlPair::constant(p2.ops.size(), p2.ops.boundary_size(), 10, 0.2, -0.1);
  for (double r : mean_ode_residual(p2.ops, solve(p2, u2), u2, 1.0)) EXPECT_LE(std::abs(r), 1e-9);
}

TEST(Forward, MeanConvergesToConstantControl) {
  const auto p = constant_problem(regular_pair(), 0.0, 2.0, 40, 1.0);
  const auto traj = solve(p, ControlPair::constant(5, 2, 40, 0.3, 0.3));
  double prev_gap = std::abs(mean(p.ops, traj.snapshots[0].phi) - 0.3);
  for (std::size_t n = 1; n < traj.snapshots.size(); ++n) {
    const double gap = std::abs(mean(p.ops, traj.snapshots[n].phi) - 0.3);
    EXPECT_NEAR(gap, prev_gap / (1.0 + 0.05), 1e-12);
    prev_gap = gap;
  }
}

TEST(Forward, ExactMeanExamples) {
  const PiecewiseConstant zero{{0.0, 1.0}, {0.0}};
  EXPECT_NEAR(exact_mean(0.5, 1.0, zero, 1.0), 0.5 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(exact_mean(0.5, 1.0, zero, 1.0), 0.18394, 1e-5);
  const PiecewiseConstant eq{{0.0, 0.3, 1.0, 2.0}, {0.7, 0.7, 0.7}};
  for (double t : {0.0, 0.2, 0.3, 1.5, 2.0}) EXPECT_NEAR(exact_mean(0.7, 2.5, eq, t), 0.7, 1e-14);
  EXPECT_THROW(exact_mean(0.0, 0.0, zero, 1.0), InvalidArgument);
}

TEST(Forward, ExactMeanMatchesRk4) {
  const PiecewiseConstant omega{{0.0, 0.25, 0.6, 1.0}, {0.4, -0.8, 0.1}};
  for (double gamma : {0.5, 1.0, 3.0}) {
    for (double t : {0.1, 0.5, 1.0}) {
      EXPECT_NEAR(exact_mean(0.2, gamma, omega, t),
                  oracle::rk4_mean(0.2, gamma, omega.breaks, omega.values, t), 1e-11);
    }
  }
}

TEST(Forward, MeanBound) {
  std::mt19937_64 rng(9);
  for (double gamma : {0.5, 1.0, 4.0}) {
    auto p = small_problem(regular_pair(), 16, 20, 1.0, Scheme::fully_implicit, 1.0, gamma);
    const double M = 0.8;
    const auto u = testing::random_control(p, rng, M);
    const auto traj = solve(p, u);
    const double m0 = mean(p.ops, p.phi0);
    // Convex combination bound of the discrete recursion.
    const double hi = std::max(m0, M), lo = std::min(m0, -M);
    for (const auto& s : traj.snapshots) {
      const double m = mean(p.ops, s.phi);
      EXPECT_LE(m, hi + 1e-9);
      EXPECT_GE(m, lo - 1e-9);
      if (gamma <= 1.0) {
        EXPECT_LE(m, std::max(m0, 0.0) + M / gamma + 1e-9);
        EXPECT_GE(m, -std::max(-m0, 0.0) - M / gamma - 1e-9);
      }
    }
  }
}

TEST(Forward, EnergyExamples) {
  const auto mesh = build_interval(4, 1.0);
  const auto ops = assemble(mesh);
  const auto pair = regular_pair();
  EXPECT_NEAR(energy(ops, pair, make_conforming(mesh, Vector::Zero(5))), 0.75, 1e-15);
  EXPECT_NEAR(energy(ops, pair, make_conforming(mesh, Vector::Ones(5))), 0.0, 1e-15);
  EXPECT_NEAR(energy(ops, pair, make_conforming(mesh, -Vector::Ones(5))), 0.0, 1e-15);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector v(5);
    for (int i = 0; i < 5; ++i) v[i] = dist(rng);
    EXPECT_GE(energy(ops, pair, make_conforming(mesh, v)), 0.0);
  }
  EXPECT_THROW(energy(ops, log_pair(), make_conforming(mesh, Vector::Ones(5))), DomainError);
}

TEST(Forward, EnergyDecaysWithoutReaction) {
  for (const auto& pair : {regular_pair(), log_pair()}) {
    auto p = small_problem(pair, 24, 40, 0.4, Scheme::convex_splitting, 1.0, 0.0);
    const auto u = ControlPair::constant(p.ops.size(), p.ops.boundary_size(), 40, 0.0, 0.0);
    const auto traj = solve(p, u);
    for (std::size_t n = 0; n + 1 < traj.snapshots.size(); ++n) {
      EXPECT_LE(energy(p.ops, pair, traj.snapshots[n + 1].phi),
                energy(p.ops, pair, traj.snapshots[n].phi) + 1e-12)
          << n;
    }
  }
}

TEST(Forward, Deterministic) {
  const auto p = small_problem(log_pair());
  const auto u = testing::smooth_control(p, 0.2);
  const auto a = solve(p, u), b = solve(p, u);
  for (std::size_t n = 0; n < a.snapshots.size(); ++n) {
    EXPECT_EQ(a.snapshots[n].phi.bulk, b.snapshots[n].phi.bulk);
    EXPECT_EQ(a.snapshots[n].mu.bulk, b.snapshots[n].mu.bulk);
  }
}

TEST(Forward, LogarithmicRunStaysSeparated) {
  const auto p = small_problem(log_pair());
  const auto u = testing::smooth_control(p, 0.3);
  const auto traj = solve(p, u);
  for (const auto& s : traj.snapshots) {
    EXPECT_LT(s.phi.bulk.cwiseAbs().maxCoeff(), 1.0);
  }
  const auto r0 = separation_r0(p.potentials, 0.0, p.phi0.bulk.cwiseAbs().maxCoeff());
  ASSERT_TRUE(r0.has_value());
  const auto report = separation_check(traj, 0.999);
  EXPECT_EQ(report.status, SeparationReport::Status::pass);
}

TEST(Forward, SeparationCheckSemantics) {
  StateTrajectory traj;
  traj.grid = TimeGrid(1.0, 1);
  const auto mesh = build_interval(2, 1.0);
  Vector v = Vector::Constant(3, 0.1);
  traj.snapshots.push_back({make_conforming(mesh, v), make_conforming(mesh, v)});
  v[1] = 0.9999;
  traj.snapshots.push_back({make_conforming(mesh, v), make_conforming(mesh, v)});
  const auto fail = separation_check(traj, 0.9);
  EXPECT_EQ(fail.status, SeparationReport::Status::fail);
  EXPECT_EQ(fail.worst_step, 1);
  EXPECT_EQ(fail.worst_node, 1);
  EXPECT_FALSE(fail.worst_on_boundary);
  EXPECT_DOUBLE_EQ(fail.worst_value, 0.9999);
  EXPECT_EQ(separation_check(traj, std::nullopt).status,
            SeparationReport::Status::not_applicable);
  EXPECT_EQ(separation_check(traj, 0.9999).status, SeparationReport::Status::pass);
}

TEST(Forward, MeanValueViolationRejected) {
  const auto p = constant_problem(log_pair(), 0.6, 1.0, 4, 1.0);
  EXPECT_THROW(solve(p, ControlPair::constant(5, 2, 4, 0.5, 0.5)), ValidationError);
  const auto outside = constant_problem(log_pair(), 1.0, 1.0, 4, 1.0);
  EXPECT_THROW(solve(outside, ControlPair::constant(5, 2, 4, 0.0, 0.0)), DomainError);
}

TEST(Forward, ControlShapeChecked) {
  const auto p = small_problem();
  EXPECT_THROW(solve(p, ControlPair::constant(p.ops.size(), 2, 5, 0.0, 0.0)), InvalidArgument);
  auto u = ControlPair::constant(p.ops.size(), 2, 20, 0.0, 0.0);
  u.bulk[3][1] = std::nan("");
  EXPECT_THROW(solve(p, u), InvalidArgument);
}

TEST(Forward, NewtonFailureReportsStep) {
  auto p = small_problem();
  p.options.newton_max_iter = 1;
  p.options.newton_tol = 1e-15;
  try {
    solve(p, testing::smooth_control(p));
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.step(), 1);
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Forward, YosidaContinuation) {
  const auto p = small_problem();
  const auto u = testing::smooth_control(p);
  const auto single = yosida_continuation(p, u, {0.1});
  EXPECT_TRUE(single.errors_vs_finest.empty());

  const auto sweep = yosida_continuation(p, u, {1e-1, 1e-2, 1e-3});
  ASSERT_EQ(sweep.errors_vs_finest.size(), 2u);
  EXPECT_GT(sweep.errors_vs_finest[0], sweep.errors_vs_finest[1]);
  ASSERT_TRUE(sweep.reference.has_value());
  ASSERT_EQ(sweep.errors_vs_reference.size(), 3u);
  EXPECT_GT(sweep.errors_vs_reference[0], sweep.errors_vs_reference[1]);
  EXPECT_GT(sweep.errors_vs_reference[1], sweep.errors_vs_reference[2]);

  EXPECT_THROW(yosida_continuation(p, u, {1e-2, 1e-1}), InvalidArgument);
  EXPECT_THROW(yosida_continuation(p, u, {}), InvalidArgument);
}

TEST(Forward, YosidaLogarithmicToleratesExcursions) {
  auto p = small_problem(log_pair(), 16, 10, 0.1);
  // Start close to the pure phases; beta_eps is finite everywhere.
  Vector phi0 = p.phi0.bulk * 2.3;
  p.phi0 = p.ops.conforming(phi0);
  const auto u = ControlPair::constant(p.ops.size(), p.ops.boundary_size(), 10, 1.5, 1.5);
  const auto result = yosida_continuation(p, u, {0.5, 0.1});
  EXPECT_EQ(result.runs.size(), 2u);
  EXPECT_FALSE(result.reference.has_value());
}

}  // namespace
}  // namespace cho
