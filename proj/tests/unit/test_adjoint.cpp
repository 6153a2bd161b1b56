#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cho/adjoint.hpp"
#include "cho/cost.hpp"
#include "cho/time_norms.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace cho {
namespace {

using testing::log_pair;
using testing::regular_pair;
using testing::small_problem;

double max_abs(const std::vector<PairField>& series) {
  double m = 0.0;
  for (const auto& f : series) m = std::max(m, f.bulk.cwiseAbs().maxCoeff());
  return m;
}

CostSpec zero_cost(const ForwardProblem& p) {
  CostSpec c = testing::tracking_cost(p);
  c.alpha = {0, 0, 0, 0, 0, 0};
  return c;
}

TEST(Adjoint, ZeroWeightsGiveZero) {
  const auto p = small_problem();
  const auto u = testing::smooth_control(p);
  const auto base = solve(p, u);
  const auto c = zero_cost(p);
  for (const auto& adj : {adjoint_solve(p, base, c), adjoint_continuous_form(p, base, c)}) {
    EXPECT_EQ(max_abs(adj.p), 0.0);
    EXPECT_EQ(max_abs(adj.q), 0.0);
  }
}

Vector implicit_diagonal(const ForwardProblem& p, const Vector& phi) {
  Vector d(phi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    d[i] = p.ops.lumped_bulk[i] * p.potentials.bulk.eval(phi[i], 2) +
           p.ops.lumped_surface[i] * p.potentials.boundary.eval(phi[i], 2);
  }
  return d;
}

TEST(Adjoint, TerminalIdentity) {
  const auto p = small_problem();
  const auto u = testing::smooth_control(p);
  const auto base = solve(p, u);
  CostSpec c = zero_cost(p);
  c.alpha[2] = 1.0;
  const Vector& phiT = base.snapshots.back().phi.bulk;
  const Vector zeta = c.weight(3) * (p.ops.mass_bulk * (phiT - c.target_final_bulk));
  const double tau = p.params.tau, dt = p.grid.dt(), gamma = p.params.gamma;

  const auto cont = adjoint_continuous_form(p, base, c);
  const Vector& pc = cont.p.back().bulk;
  const Vector& qc = cont.q.back().bulk;
  EXPECT_LT((p.ops.mass * (pc + tau * qc) - zeta).cwiseAbs().maxCoeff(), 1e-12);

  // Discrete adjoint: the same identity up to the O(dt) implicit-step terms.
  const auto disc = adjoint_solve(p, base, c);
  const Vector& pd = disc.p.back().bulk;
  const Vector& qd = disc.q.back().bulk;
  const Vector d = implicit_diagonal(p, phiT);
  const Vector lhs = p.ops.mass * (pd + tau * qd) +
                     dt * (gamma * (p.ops.mass * pd) + p.ops.stiffness * qd + d.cwiseProduct(qd));
  EXPECT_LT((lhs - zeta).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((p.ops.stiffness * pd - p.ops.mass * qd).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((p.ops.stiffness * pc - p.ops.mass * qc).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Adjoint, DualityIdentity) {
  std::mt19937_64 rng(42);
  for (const auto& pair : {regular_pair(), log_pair()}) {
    for (Scheme scheme : {Scheme::fully_implicit, Scheme::convex_splitting}) {
      const auto p = small_problem(pair, 16, 20, 0.2, scheme);
      const auto u = testing::smooth_control(p, 0.2);
      const auto c = testing::tracking_cost(p);
      const auto base = solve(p, u);
      const Linearization lin(p, base);
      const auto g = reduced_gradient(p, u, adjoint_solve(lin, base, c), c);
      for (int trial = 0; trial < 5; ++trial) {
        const auto h = testing::random_control(p, rng);
        const double adj = control_inner(p.ops, p.grid, g, h);
        const double direct = linearized_cost_derivative(p, base, u, c, lin.solve(h), h);
        EXPECT_LE(std::abs(adj - direct) / std::max(1.0, std::abs(direct)), 1e-10);
      }
    }
  }
}

TEST(Adjoint, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  auto p = small_problem(regular_pair(), 16, 20, 0.2);
  p.options.newton_tol = 1e-13;
  const auto u = testing::smooth_control(p, 0.2);
  const auto c = testing::tracking_cost(p);
  const auto base = solve(p, u);
  const auto g = reduced_gradient(p, u, adjoint_solve(p, base, c), c);
  auto j = [&](const ControlPair& v) { return cost(p.ops, p.grid, c, solve(p, v), v); };
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = testing::random_control(p, rng);
    const double fd = oracle::central_difference(
        [&](double s) {
          ControlPair v = u;
          v.axpy(s, h);
          return j(v);
        },
        0.0, 1e-4);
    const double adj = control_inner(p.ops, p.grid, g, h);
    EXPECT_LE(std::abs(adj - fd) / std::abs(fd), 1e-6);
  }
}

TEST(Adjoint, GradientReductions) {
  const auto u_p = small_problem(regular_pair(), 16, 20, 0.2, Scheme::fully_implicit, 1.0, 0.0);
  const auto u = testing::smooth_control(u_p);
  const auto c = testing::tracking_cost(u_p);
  const auto base = solve(u_p, u);
  const auto g = reduced_gradient(u_p, u, adjoint_solve(u_p, base, c), c);
  for (int k = 0; k < u_p.grid.steps; ++k) {
    EXPECT_EQ(g.bulk[k], c.weight(5) * u.bulk[k]);
    EXPECT_EQ(g.boundary[k], c.weight(6) * u.boundary[k]);
  }

  const auto p = small_problem();
  CostSpec c2 = testing::tracking_cost(p);
  c2.alpha[4] = c2.alpha[5] = 0.0;
  const auto base2 = solve(p, u);
  const auto adj = adjoint_solve(p, base2, c2);
  const auto g2 = reduced_gradient(p, u, adj, c2);
  for (int k = 0; k < p.grid.steps; ++k) {
    EXPECT_EQ(g2.bulk[k], p.params.gamma * adj.p[k + 1].bulk);
  }
}

TEST(Adjoint, LinearInCostData) {
  const auto p = small_problem();
  const auto u = testing::smooth_control(p);
  const auto base = solve(p, u);
  CostSpec a = testing::tracking_cost(p);
  CostSpec b = a;
  a.alpha = {1.0, 0.0, 0.5, 0.0, 0.0, 0.0};
  b.alpha = {0.0, 2.0, 0.0, 0.7, 0.0, 0.0};
  CostSpec sum = a;
  sum.alpha = {1.0, 2.0, 0.5, 0.7, 0.0, 0.0};
  const Linearization lin(p, base);
  const auto pa = adjoint_solve(lin, base, a), pb = adjoint_solve(lin, base, b);
  const auto ps = adjoint_solve(lin, base, sum);
  for (std::size_t n = 0; n < ps.p.size(); ++n) {
    EXPECT_LT((ps.p[n].bulk - pa.p[n].bulk - pb.p[n].bulk).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((ps.q[n].bulk - pa.q[n].bulk - pb.q[n].bulk).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Adjoint, Deterministic) {
  const auto p = small_problem(log_pair());
  const auto u = testing::smooth_control(p, 0.2);
  const auto c = testing::tracking_cost(p);
  const auto base = solve(p, u);
  const auto a = adjoint_solve(p, base, c), b = adjoint_solve(p, base, c);
  const auto x = adjoint_continuous_form(p, base, c), y = adjoint_continuous_form(p, base, c);
  for (std::size_t n = 0; n < a.p.size(); ++n) {
    EXPECT_EQ(a.p[n].bulk, b.p[n].bulk);
    EXPECT_EQ(x.q[n].bulk, y.q[n].bulk);
  }
}

TEST(Adjoint, DiscreteAndContinuousFormsConverge) {
  std::vector<double> gaps;
  for (int level = 0; level < 3; ++level) {
    const int cells = 16 << level, steps = 20 << level;
    const auto p = small_problem(regular_pair(), cells, steps, 0.2);
    const auto u = testing::smooth_control(p);
    const auto c = testing::tracking_cost(p);
    const auto base = solve(p, u);
    const auto d = adjoint_solve(p, base, c);
    const auto e = adjoint_continuous_form(p, base, c);
    gaps.push_back(l2_H(p.ops, p.grid, difference(d.p, e.p)) / l2_H(p.ops, p.grid, e.p));
  }
  EXPECT_GT(gaps[0], gaps[1]);
  EXPECT_GT(gaps[1], gaps[2]);
}

TEST(Adjoint, CostExamples) {
  const auto mesh = build_interval(4, 1.0);
  ForwardProblem p(mesh, regular_pair(), SolverOptions{}, PhysicalParams{}, TimeGrid(1.0, 4),
                   Vector::Zero(5));
  CostSpec c;
  c.alpha = {0, 0, 0, 0, 2.0, 0};
  const auto u = ControlPair::constant(5, 2, 4, 1.0, 0.0);
  const auto traj = solve(p, u);
  EXPECT_NEAR(cost(p.ops, p.grid, c, traj, u), 1.0, 1e-14);

  auto tracking = testing::tracking_cost(p);
  const double j1 = cost(p.ops, p.grid, tracking, traj, u);
  for (double& a : tracking.alpha) a *= 2.0;
  EXPECT_NEAR(cost(p.ops, p.grid, tracking, traj, u), 2.0 * j1, 1e-14);

  // States equal to the targets with zero control.
  CostSpec match;
  match.alpha = {1, 1, 1, 1, 1, 1};
  const auto zero = ControlPair::constant(5, 2, 4, 0.0, 0.0);
  const auto rest = solve(p, zero);
  for (const auto& s : rest.snapshots) {
    match.target_bulk.push_back(s.phi.bulk);
    match.target_boundary.push_back(s.phi.boundary);
  }
  match.target_final_bulk = rest.snapshots.back().phi.bulk;
  match.target_final_boundary = rest.snapshots.back().phi.boundary;
  EXPECT_EQ(cost(p.ops, p.grid, match, rest, zero), 0.0);

  CostSpec negative;
  negative.alpha = {-1, 0, 0, 0, 0, 0};
  EXPECT_THROW(check_cost_spec(p.ops, p.grid, negative), InvalidArgument);
}

}  // namespace
}  // namespace cho
