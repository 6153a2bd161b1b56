#pragma once

#include <cmath>
#include <random>

#include "cho/control.hpp"
#include "cho/forward.hpp"
#include "cho/mesh.hpp"
#include "cho/potentials.hpp"

namespace cho::testing {

inline Vector nodal(const BulkSurfaceMesh& mesh, double (*f)(double, double)) {
  Vector v(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) v[i] = f(mesh.nodes()[i][0], mesh.nodes()[i][1]);
  return v;
}

inline PotentialPair regular_pair() {
  return make_potential_pair(Potential::regular(), Potential::regular());
}

inline PotentialPair log_pair(double c1 = 2.0) {
  return make_potential_pair(Potential::logarithmic(c1), Potential::logarithmic(c1));
}

/// Small 1D problem with a smooth, non-constant initial state.
inline ForwardProblem small_problem(PotentialPair pair = regular_pair(), int cells = 16,
                                    int steps = 20, double T = 0.2,
                                    Scheme scheme = Scheme::fully_implicit, double tau = 1.0,
                                    double gamma = 1.0) {
  BulkSurfaceMesh mesh = build_interval(cells, 1.0);
  Vector phi0(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const double x = mesh.nodes()[i][0];
    phi0[i] = 0.1 + 0.4 * std::cos(M_PI * x) + 0.1 * std::sin(3.0 * M_PI * x);
  }
  SolverOptions opts;
  opts.scheme = scheme;
  return ForwardProblem(std::move(mesh), std::move(pair), opts, PhysicalParams{tau, gamma},
                        TimeGrid(T, steps), phi0);
}

inline ForwardProblem small_problem_2d(PotentialPair pair = regular_pair(), int n = 4,
                                       int steps = 10, double T = 0.1) {
  BulkSurfaceMesh mesh = build_rectangle(n, n, 1.0, 1.0);
  Vector phi0(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const auto& p = mesh.nodes()[i];
    phi0[i] = 0.2 * std::cos(M_PI * p[0]) * std::cos(M_PI * p[1]) + 0.05;
  }
  return ForwardProblem(std::move(mesh), std::move(pair), SolverOptions{},
                        PhysicalParams{1.0, 1.0}, TimeGrid(T, steps), phi0);
}

/// Smooth space-time control with distinct boundary part.
inline ControlPair smooth_control(const ForwardProblem& p, double amplitude = 0.3) {
  ControlPair u = ControlPair::constant(p.ops.size(), p.ops.boundary_size(), p.grid.steps, 0.0, 0.0);
  for (int k = 0; k < p.grid.steps; ++k) {
    const double t = p.grid.t(k + 1);
    for (Eigen::Index i = 0; i < p.ops.size(); ++i) {
      const double x = p.mesh.nodes()[i][0];
      u.bulk[k][i] = amplitude * std::sin(M_PI * x) * std::cos(2.0 * t);
    }
    for (Eigen::Index i = 0; i < p.ops.boundary_size(); ++i) {
      u.boundary[k][i] = -0.5 * amplitude * (1.0 + t) * (i % 2 == 0 ? 1.0 : -0.5);
    }
  }
  return u;
}

inline ControlPair random_control(const ForwardProblem& p, std::mt19937_64& rng,
                                  double amplitude = 1.0) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  ControlPair u = ControlPair::constant(p.ops.size(), p.ops.boundary_size(), p.grid.steps, 0.0, 0.0);
  for (auto& v : u.bulk) for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
  for (auto& v : u.boundary) for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
  return u;
}

inline CostSpec tracking_cost(const ForwardProblem& p) {
  CostSpec c;
  c.alpha = {1.0, 0.5, 1.0, 0.5, 1e-2, 1e-2};
  for (int n = 0; n <= p.grid.steps; ++n) {
    Vector target(p.ops.size());
    for (Eigen::Index i = 0; i < p.ops.size(); ++i) {
      target[i] = 0.3 * std::cos(M_PI * p.mesh.nodes()[i][0]);
    }
    c.target_bulk.push_back(target);
    c.target_boundary.push_back(Vector::Constant(p.ops.boundary_size(), -0.2));
  }
  c.target_final_bulk = c.target_bulk.back();
  c.target_final_boundary = Vector::Constant(p.ops.boundary_size(), 0.1);
  return c;
}

}  // namespace cho::testing
