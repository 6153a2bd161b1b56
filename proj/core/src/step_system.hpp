#pragma once

#include <Eigen/SparseLU>

#include "cho/forward.hpp"

namespace cho::detail {

/// Residual and Jacobian of one implicit Euler step in the stacked unknown
/// x = [phi^{n+1}; mu^{n+1}]:
///
///   R1 = (1/dt) M (phi - phi^n) + K mu + gamma M phi - gamma f
///   R2 = (tau/dt) M (phi - phi^n) + K phi + N(phi; phi^n) - M mu
///
/// with M, K the coupled mass and stiffness, f = M_b u + M_s u_G and N the
/// lumped nodal potential force.
class StepSystem {
 public:
  StepSystem(const CoupledOperators& ops, const PotentialPair& pair,
             const SolverOptions& options, const PhysicalParams& params, double dt);

  Eigen::Index size() const noexcept { return ops_->size(); }
  double dt() const noexcept { return dt_; }
  bool bounded() const noexcept { return bulk_.bounded() || boundary_.bounded(); }

  Vector source(const Vector& control_bulk, const Vector& control_boundary) const;
  Vector force(const Vector& phi_new, const Vector& phi_old) const;
  /// Diagonal of dN/dphi^{n+1}.
  Vector implicit_diagonal(const Vector& phi_new) const;
  /// Diagonal of dN/dphi^n (zero for the fully implicit scheme).
  Vector explicit_diagonal(const Vector& phi_old) const;
  /// Lumped F'' weights (used by the optimize-then-discretize adjoint).
  Vector second_derivative_diagonal(const Vector& phi) const;
  /// Lumped F' force evaluated fully at `phi`.
  Vector full_force(const Vector& phi) const;

  Vector residual(const Vector& phi, const Vector& mu, const Vector& phi_old,
                  const Vector& source) const;

  /// [[ (1/dt + gamma) M, K ], [ (tau/dt) M + K + diag(d), -M ]]
  SparseMatrix jacobian(const Vector& diagonal) const;

  /// Lumped-H dual norm sqrt(sum_i r_i^2 / m_i) over both blocks.
  double dual_norm(const Vector& stacked) const;

 private:
  template <class F>
  Vector nodal(const Vector& phi, F&& f) const;

  const CoupledOperators* ops_;
  EffectivePotential bulk_;
  EffectivePotential boundary_;
  Scheme scheme_;
  PhysicalParams params_;
  double dt_;
  Vector lumped_total_;
};

/// Assemble a 2x2 block sparse matrix from square blocks of equal size.
SparseMatrix block_matrix(const SparseMatrix& a11, const SparseMatrix& a12,
                          const SparseMatrix& a21, const SparseMatrix& a22);

using SparseLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

/// Factorizes `m` into `lu`; throws SolverError tagged with `step` on failure.
void factorize(SparseLU& lu, const SparseMatrix& m, int step);

}  // namespace cho::detail
