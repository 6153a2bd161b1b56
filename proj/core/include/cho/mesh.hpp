#pragma once

#include <array>
#include <string>
#include <vector>

#include "cho/common.hpp"

namespace cho {

/// Bulk triangulation (segments in 1D, triangles in 2D) together with the
/// boundary sub-mesh. Boundary elements index boundary nodes; `trace_map`
/// sends boundary node k to the bulk node it sits on.
///
/// In 1D the boundary is the two endpoints, each carrying unit measure, so
/// surface() == 2.
class BulkSurfaceMesh {
 public:
  using Point = std::array<double, 2>;
  /// Node indices; the unused trailing slot is -1 (third entry in 1D).
  using Cell = std::array<int, 3>;
  /// Boundary node indices; the second slot is -1 in 1D.
  using BoundaryCell = std::array<int, 2>;

  BulkSurfaceMesh(int dim, std::vector<Point> nodes, std::vector<Cell> cells,
                  std::vector<BoundaryCell> boundary_cells,
                  std::vector<int> trace_map);

  int dim() const noexcept { return dim_; }
  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_boundary_nodes() const noexcept { return trace_map_.size(); }

  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const std::vector<BoundaryCell>& boundary_cells() const noexcept {
    return boundary_cells_;
  }
  const std::vector<int>& trace_map() const noexcept { return trace_map_; }

  double cell_measure(std::size_t c) const;
  double boundary_cell_measure(std::size_t b) const;

  /// |Omega|
  double volume() const noexcept { return volume_; }
  /// |Gamma|
  double surface() const noexcept { return surface_; }

  /// One-line human readable summary for reports.
  std::string summary() const;

 private:
  void validate() const;

  int dim_;
  std::vector<Point> nodes_;
  std::vector<Cell> cells_;
  std::vector<BoundaryCell> boundary_cells_;
  std::vector<int> trace_map_;
  double volume_ = 0.0;
  double surface_ = 0.0;
};

/// Uniform partition of [0, length] into n_cells segments.
BulkSurfaceMesh build_interval(int n_cells, double length);

/// Structured triangulation of [0,lx] x [0,ly] with two triangles per cell.
/// The boundary polyline runs counter-clockwise starting at the origin.
BulkSurfaceMesh build_rectangle(int nx, int ny, double lx, double ly);

/// Boundary values of a bulk nodal vector, ordered by boundary node index.
Vector trace(const BulkSurfaceMesh& mesh, const Vector& bulk_values);

/// Bulk vector equal to `boundary_values` on trace-mapped nodes, zero elsewhere.
Vector embed_boundary(const BulkSurfaceMesh& mesh, const Vector& boundary_values);

}  // namespace cho
