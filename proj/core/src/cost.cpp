#include "cho/cost.hpp"

namespace cho {

namespace {

const Vector* target_at(const std::vector<Vector>& series, int n) {
  return series.empty() ? nullptr : &series.at(n);
}

double squared_mass(const SparseMatrix& m, const Vector& v) { return v.dot(m * v); }

}  // namespace

void check_cost_spec(const CoupledOperators& ops, const TimeGrid& grid, const CostSpec& spec) {
  for (double a : spec.alpha) {
    if (!(a >= 0.0)) throw InvalidArgument("cost weights must be nonnegative");
  }
  auto check_series = [&](const std::vector<Vector>& s, Eigen::Index size) {
    if (s.empty()) return;
    if (static_cast<int>(s.size()) != grid.steps + 1) {
      throw InvalidArgument("space-time target needs one entry per time node");
    }
    for (const auto& v : s) {
      if (v.size() != size) throw InvalidArgument("target size does not match the mesh");
    }
  };
  check_series(spec.target_bulk, ops.size());
  check_series(spec.target_boundary, ops.boundary_size());
  if (spec.target_final_bulk.size() != 0 && spec.target_final_bulk.size() != ops.size()) {
    throw InvalidArgument("terminal bulk target size does not match the mesh");
  }
  if (spec.target_final_boundary.size() != 0 &&
      spec.target_final_boundary.size() != ops.boundary_size()) {
    throw InvalidArgument("terminal boundary target size does not match the mesh");
  }
}

Vector running_source(const CoupledOperators& ops, const CostSpec& spec, const Vector& phi,
                      int n) {
  Vector out = Vector::Zero(ops.size());
  if (spec.weight(1) != 0.0) {
    const Vector* target = target_at(spec.target_bulk, n);
    out += spec.weight(1) * (ops.mass_bulk * (target ? Vector(phi - *target) : phi));
  }
  if (spec.weight(2) != 0.0) {
    Vector diff = ops.trace(phi);
    if (const Vector* target = target_at(spec.target_boundary, n)) diff -= *target;
    out += spec.weight(2) * ops.embed(ops.mass_boundary * diff);
  }
  return out;
}

Vector terminal_source(const CoupledOperators& ops, const CostSpec& spec, const Vector& phi) {
  Vector out = Vector::Zero(ops.size());
  if (spec.weight(3) != 0.0) {
    Vector diff = phi;
    if (spec.target_final_bulk.size() != 0) diff -= spec.target_final_bulk;
    out += spec.weight(3) * (ops.mass_bulk * diff);
  }
  if (spec.weight(4) != 0.0) {
    Vector diff = ops.trace(phi);
    if (spec.target_final_boundary.size() != 0) diff -= spec.target_final_boundary;
    out += spec.weight(4) * ops.embed(ops.mass_boundary * diff);
  }
  return out;
}

double cost(const CoupledOperators& ops, const TimeGrid& grid, const CostSpec& spec,
            const StateTrajectory& trajectory, const ControlPair& u) {
  check_cost_spec(ops, grid, spec);
  check_control_shape(ops, u, grid.steps);
  const double dt = grid.dt();
  double running = 0.0;
  for (int n = 1; n <= grid.steps; ++n) {
    const Vector& phi = trajectory.snapshots.at(n).phi.bulk;
    if (spec.weight(1) != 0.0) {
      const Vector* target = target_at(spec.target_bulk, n);
      running += spec.weight(1) *
                 squared_mass(ops.mass_bulk, target ? Vector(phi - *target) : phi);
    }
    if (spec.weight(2) != 0.0) {
      Vector diff = ops.trace(phi);
      if (const Vector* target = target_at(spec.target_boundary, n)) diff -= *target;
      running += spec.weight(2) * squared_mass(ops.mass_boundary, diff);
    }
    running += spec.weight(5) * squared_mass(ops.mass_bulk, u.bulk[n - 1]);
    running += spec.weight(6) * squared_mass(ops.mass_boundary, u.boundary[n - 1]);
  }

  double terminal = 0.0;
  const Vector& phi_T = trajectory.snapshots.at(grid.steps).phi.bulk;
  if (spec.weight(3) != 0.0) {
    Vector diff = phi_T;
    if (spec.target_final_bulk.size() != 0) diff -= spec.target_final_bulk;
    terminal += spec.weight(3) * squared_mass(ops.mass_bulk, diff);
  }
  if (spec.weight(4) != 0.0) {
    Vector diff = ops.trace(phi_T);
    if (spec.target_final_boundary.size() != 0) diff -= spec.target_final_boundary;
    terminal += spec.weight(4) * squared_mass(ops.mass_boundary, diff);
  }
  return 0.5 * dt * running + 0.5 * terminal;
}

std::vector<Vector> cost_state_sources(const CoupledOperators& ops, const TimeGrid& grid,
                                       const CostSpec& spec,
                                       const StateTrajectory& trajectory) {
  check_cost_spec(ops, grid, spec);
  std::vector<Vector> out(grid.steps + 1);
  for (int n = 0; n <= grid.steps; ++n) {
    out[n] = grid.dt() * running_source(ops, spec, trajectory.snapshots.at(n).phi.bulk, n);
  }
  out[grid.steps] += terminal_source(ops, spec, trajectory.snapshots.back().phi.bulk);
  return out;
}

}  // namespace cho
