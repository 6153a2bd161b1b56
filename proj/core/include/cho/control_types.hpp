#pragma once

#include <array>
#include <vector>

#include "cho/common.hpp"
#include "cho/spaces.hpp"

namespace cho {

/// Distributed and boundary sources, nodal in space and piecewise constant in
/// time: slab k covers (t_k, t_{k+1}] and is the value the implicit step
/// k -> k+1 sees.
struct ControlPair {
  std::vector<Vector> bulk;
  std::vector<Vector> boundary;

  static ControlPair constant(Eigen::Index n, Eigen::Index nb, int slabs, double bulk_value,
                              double boundary_value);
  static ControlPair zeros_like(const ControlPair& other);

  int slabs() const noexcept { return static_cast<int>(bulk.size()); }
  /// max |u|, |u_G| over all slabs and nodes
  double sup_norm() const;
  bool finite() const;

  /// this += a * other
  ControlPair& axpy(double a, const ControlPair& other);
  ControlPair scaled(double a) const;
};

ControlPair operator+(ControlPair a, const ControlPair& b);
ControlPair operator-(ControlPair a, const ControlPair& b);

/// Throws InvalidArgument unless `u` has `slabs` slabs sized like `ops`.
void check_control_shape(const CoupledOperators& ops, const ControlPair& u, int slabs);

/// Box constraints of the admissible set plus the H1-in-time budget M'.
struct BoxBounds {
  ControlPair lower;
  ControlPair upper;
  double derivative_budget = 1e3;

  /// max of the four sup-norms of the bounds
  double sup_bound() const;
  /// lower <= upper everywhere
  bool consistent() const;
};

/// Tracking-type cost weights alpha_1..alpha_6 and targets. Space-time
/// targets hold one vector per time node (N+1 entries); an empty target is
/// zero.
struct CostSpec {
  std::array<double, 6> alpha{};
  std::vector<Vector> target_bulk;       // phi^Q
  std::vector<Vector> target_boundary;   // phi^Sigma
  Vector target_final_bulk;              // phi^Omega
  Vector target_final_boundary;          // phi^Gamma

  double weight(int i) const { return alpha.at(i - 1); }
  bool all_zero() const;
};

}  // namespace cho
