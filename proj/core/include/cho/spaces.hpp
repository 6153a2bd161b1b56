#pragma once

#include <vector>

#include "cho/common.hpp"
#include "cho/mesh.hpp"

namespace cho {

/// Bulk nodal values paired with boundary nodal values. Elements of the
/// trace-conforming space have boundary == trace(bulk); non-conforming pairs
/// represent general elements of the product L2 space.
struct PairField {
  Vector bulk;
  Vector boundary;
};

/// Pair whose boundary part is the trace of `bulk`.
PairField make_conforming(const BulkSurfaceMesh& mesh, Vector bulk);

/// Pair of zeros sized for `mesh`.
PairField zero_pair(const BulkSurfaceMesh& mesh);

/// Exact equality of the boundary part with the trace of the bulk part.
bool is_conforming(const BulkSurfaceMesh& mesh, const PairField& field);

/// P1 mass and stiffness operators. Surface operators are embedded in bulk
/// dof indexing so the coupled bilinear forms are plain sums; the
/// boundary-indexed surface mass is kept for non-conforming boundary data.
struct CoupledOperators {
  SparseMatrix mass_bulk;
  SparseMatrix stiffness_bulk;
  SparseMatrix mass_surface;
  SparseMatrix stiffness_surface;

  /// mass_bulk + mass_surface
  SparseMatrix mass;
  /// stiffness_bulk + stiffness_surface
  SparseMatrix stiffness;

  /// Surface mass over boundary node indices.
  SparseMatrix mass_boundary;

  /// Row sums of the bulk and surface mass (lumped quadrature weights).
  Vector lumped_bulk;
  Vector lumped_surface;

  std::vector<int> trace_map;
  double volume = 0.0;
  double surface = 0.0;

  Eigen::Index size() const noexcept { return mass_bulk.rows(); }
  Eigen::Index boundary_size() const noexcept {
    return static_cast<Eigen::Index>(trace_map.size());
  }

  Vector trace(const Vector& bulk) const;
  Vector embed(const Vector& boundary) const;
  PairField conforming(Vector bulk) const;
};

CoupledOperators assemble(const BulkSurfaceMesh& mesh);

/// Extended mean value (int_Omega z + int_Gamma z_G) / (|Omega| + |Gamma|).
double mean(const CoupledOperators& ops, const PairField& field);

double inner_H(const CoupledOperators& ops, const PairField& a, const PairField& b);
double norm_H(const CoupledOperators& ops, const PairField& field);

/// Graph norm on the conforming space: H norm plus both gradient seminorms.
/// Throws InvalidArgument on a non-conforming pair.
double norm_V(const CoupledOperators& ops, const PairField& field);

}  // namespace cho
