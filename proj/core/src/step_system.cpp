#include "step_system.hpp"

#include <cmath>

namespace cho::detail {

StepSystem::StepSystem(const CoupledOperators& ops, const PotentialPair& pair,
                       const SolverOptions& options, const PhysicalParams& params, double dt)
    : ops_(&ops),
      bulk_(pair.bulk, options.eps_yosida),
      boundary_(pair.boundary, options.eps_yosida),
      scheme_(options.scheme),
      params_(params),
      dt_(dt),
      lumped_total_(ops.lumped_bulk + ops.lumped_surface) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(params.tau > 0.0)) throw InvalidArgument("viscosity tau must be positive");
  if (params.gamma < 0.0) throw InvalidArgument("reaction rate gamma must be nonnegative");
}

template <class F>
Vector StepSystem::nodal(const Vector& phi, F&& f) const {
  const Vector& lb = ops_->lumped_bulk;
  const Vector& ls = ops_->lumped_surface;
  Vector out(phi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    try {
      double v = lb[i] * f(bulk_, phi[i]);
      if (ls[i] != 0.0) v += ls[i] * f(boundary_, phi[i]);
      out[i] = v;
    } catch (const DomainError& e) {
      throw DomainError(e.what(), phi[i], i);
    }
  }
  return out;
}

Vector StepSystem::source(const Vector& control_bulk, const Vector& control_boundary) const {
  return ops_->mass_bulk * control_bulk + ops_->embed(ops_->mass_boundary * control_boundary);
}

Vector StepSystem::force(const Vector& phi_new, const Vector& phi_old) const {
  if (scheme_ == Scheme::fully_implicit) return full_force(phi_new);
  return nodal(phi_new, [](const EffectivePotential& p, double r) { return p.convex_first(r); }) +
         nodal(phi_old, [](const EffectivePotential& p, double r) { return p.concave_first(r); });
}

Vector StepSystem::full_force(const Vector& phi) const {
  return nodal(phi, [](const EffectivePotential& p, double r) { return p.first(r); });
}

Vector StepSystem::implicit_diagonal(const Vector& phi_new) const {
  if (scheme_ == Scheme::fully_implicit) return second_derivative_diagonal(phi_new);
  return nodal(phi_new, [](const EffectivePotential& p, double r) { return p.convex_second(r); });
}

Vector StepSystem::explicit_diagonal(const Vector& phi_old) const {
  if (scheme_ == Scheme::fully_implicit) return Vector::Zero(phi_old.size());
  return nodal(phi_old, [](const EffectivePotential& p, double r) { return p.concave_second(r); });
}

Vector StepSystem::second_derivative_diagonal(const Vector& phi) const {
  return nodal(phi, [](const EffectivePotential& p, double r) { return p.second(r); });
}

Vector StepSystem::residual(const Vector& phi, const Vector& mu, const Vector& phi_old,
                            const Vector& source) const {
  const Eigen::Index n = size();
  const Vector mass_increment = ops_->mass * (phi - phi_old);
  Vector r(2 * n);
  r.head(n) = mass_increment / dt_ + ops_->stiffness * mu +
              params_.gamma * (ops_->mass * phi) - params_.gamma * source;
  r.tail(n) = (params_.tau / dt_) * mass_increment + ops_->stiffness * phi +
              force(phi, phi_old) - ops_->mass * mu;
  return r;
}

SparseMatrix StepSystem::jacobian(const Vector& diagonal) const {
  SparseMatrix a11 = (1.0 / dt_ + params_.gamma) * ops_->mass;
  SparseMatrix a21 = (params_.tau / dt_) * ops_->mass + ops_->stiffness;
  SparseMatrix d(size(), size());
  d.reserve(Eigen::VectorXi::Constant(size(), 1));
  for (Eigen::Index i = 0; i < size(); ++i) d.insert(i, i) = diagonal[i];
  a21 += d;
  SparseMatrix a22 = -ops_->mass;
  return block_matrix(a11, ops_->stiffness, a21, a22);
}

double StepSystem::dual_norm(const Vector& stacked) const {
  const Eigen::Index n = size();
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    s += (stacked[i] * stacked[i] + stacked[n + i] * stacked[n + i]) / lumped_total_[i];
  }
  return std::sqrt(s);
}

SparseMatrix block_matrix(const SparseMatrix& a11, const SparseMatrix& a12,
                          const SparseMatrix& a21, const SparseMatrix& a22) {
  const Eigen::Index n = a11.rows();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a11.nonZeros() + a12.nonZeros() + a21.nonZeros() + a22.nonZeros());
  auto add = [&t](const SparseMatrix& m, Eigen::Index r0, Eigen::Index c0) {
    for (int k = 0; k < m.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
        t.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
      }
    }
  };
  add(a11, 0, 0);
  add(a12, 0, n);
  add(a21, n, 0);
  add(a22, n, n);
  SparseMatrix out(2 * n, 2 * n);
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

void factorize(SparseLU& lu, const SparseMatrix& m, int step) {
  lu.compute(m);
  if (lu.info() != Eigen::Success) {
    throw SolverError("singular step matrix: " + lu.lastErrorMessage(), step, 0.0);
  }
}

}  // namespace cho::detail
