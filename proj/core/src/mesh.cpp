#include "cho/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace cho {

namespace {

double distance(const BulkSurfaceMesh::Point& a, const BulkSurfaceMesh::Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

BulkSurfaceMesh::BulkSurfaceMesh(int dim, std::vector<Point> nodes,
                                 std::vector<Cell> cells,
                                 std::vector<BoundaryCell> boundary_cells,
                                 std::vector<int> trace_map)
    : dim_(dim),
      nodes_(std::move(nodes)),
      cells_(std::move(cells)),
      boundary_cells_(std::move(boundary_cells)),
      trace_map_(std::move(trace_map)) {
  if (dim_ != 1 && dim_ != 2) {
    throw InvalidArgument("mesh dimension must be 1 or 2");
  }
  validate();
  for (std::size_t c = 0; c < cells_.size(); ++c) volume_ += cell_measure(c);
  for (std::size_t b = 0; b < boundary_cells_.size(); ++b) {
    surface_ += boundary_cell_measure(b);
  }
}

double BulkSurfaceMesh::cell_measure(std::size_t c) const {
  const Cell& cell = cells_.at(c);
  const Point& a = nodes_[cell[0]];
  const Point& b = nodes_[cell[1]];
  if (dim_ == 1) return std::abs(b[0] - a[0]);
  const Point& p = nodes_[cell[2]];
  return 0.5 * ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1]));
}

double BulkSurfaceMesh::boundary_cell_measure(std::size_t b) const {
  const BoundaryCell& edge = boundary_cells_.at(b);
  if (dim_ == 1) return 1.0;
  return distance(nodes_[trace_map_[edge[0]]], nodes_[trace_map_[edge[1]]]);
}

void BulkSurfaceMesh::validate() const {
  const int n = static_cast<int>(nodes_.size());
  const int nb = static_cast<int>(trace_map_.size());
  const int corners = dim_ + 1;
  if (cells_.empty()) throw InvalidArgument("mesh has no cells");

  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int k = 0; k < corners; ++k) {
      if (cells_[c][k] < 0 || cells_[c][k] >= n) {
        throw InvalidArgument("cell " + std::to_string(c) + " references a missing node");
      }
    }
    if (!(cell_measure(c) > 0.0)) {
      throw InvalidArgument("cell " + std::to_string(c) + " has non-positive measure");
    }
  }

  std::vector<int> seen(n, 0);
  for (int bulk : trace_map_) {
    if (bulk < 0 || bulk >= n) throw InvalidArgument("trace map points outside the bulk mesh");
    if (seen[bulk]++ > 0) throw InvalidArgument("trace map is not injective");
  }

  const int per_boundary_cell = dim_;
  for (std::size_t b = 0; b < boundary_cells_.size(); ++b) {
    for (int k = 0; k < per_boundary_cell; ++k) {
      const int node = boundary_cells_[b][k];
      if (node < 0 || node >= nb) {
        throw InvalidArgument("boundary cell " + std::to_string(b) +
                              " references a node missing from the trace map");
      }
    }
    if (!(boundary_cell_measure(b) > 0.0)) {
      throw InvalidArgument("boundary cell " + std::to_string(b) + " is degenerate");
    }
  }

  if (dim_ == 1) {
    if (nb != 2 || boundary_cells_.size() != 2) {
      throw InvalidArgument("1D mesh must have exactly two boundary points");
    }
    return;
  }

  // Closed polylines: every boundary node has exactly two incident edges.
  std::vector<int> degree(nb, 0);
  for (const auto& edge : boundary_cells_) {
    ++degree[edge[0]];
    ++degree[edge[1]];
  }
  if (std::any_of(degree.begin(), degree.end(), [](int d) { return d != 2; })) {
    throw InvalidArgument("boundary polyline is not closed");
  }

  // Boundary edges coincide with the bulk edges owned by a single triangle.
  std::map<std::pair<int, int>, int> edge_count;
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (const auto& cell : cells_) {
    for (int k = 0; k < 3; ++k) ++edge_count[key(cell[k], cell[(k + 1) % 3])];
  }
  std::size_t topological = 0;
  for (const auto& [edge, count] : edge_count) topological += (count == 1);
  if (topological != boundary_cells_.size()) {
    throw InvalidArgument("boundary sub-mesh does not cover the topological boundary");
  }
  for (const auto& edge : boundary_cells_) {
    auto it = edge_count.find(key(trace_map_[edge[0]], trace_map_[edge[1]]));
    if (it == edge_count.end() || it->second != 1) {
      throw InvalidArgument("boundary edge is not on the topological boundary");
    }
  }
}

std::string BulkSurfaceMesh::summary() const {
  std::ostringstream out;
  out << "dim=" << dim_ << " nodes=" << num_nodes() << " cells=" << cells_.size()
      << " boundary_nodes=" << num_boundary_nodes() << " volume=" << volume_
      << " surface=" << surface_;
  return out.str();
}

BulkSurfaceMesh build_interval(int n_cells, double length) {
  if (n_cells < 1) throw InvalidArgument("interval needs at least one cell");
  if (!(length > 0.0)) throw InvalidArgument("interval length must be positive");
  std::vector<BulkSurfaceMesh::Point> nodes(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i) nodes[i] = {length * i / n_cells, 0.0};
  nodes[n_cells][0] = length;
  std::vector<BulkSurfaceMesh::Cell> cells(n_cells);
  for (int i = 0; i < n_cells; ++i) cells[i] = {i, i + 1, -1};
  return BulkSurfaceMesh(1, std::move(nodes), std::move(cells), {{0, -1}, {1, -1}},
                         {0, n_cells});
}

BulkSurfaceMesh build_rectangle(int nx, int ny, double lx, double ly) {
  if (nx < 1 || ny < 1) throw InvalidArgument("rectangle needs at least one cell per direction");
  if (!(lx > 0.0) || !(ly > 0.0)) throw InvalidArgument("rectangle sides must be positive");

  auto id = [nx](int i, int j) { return i + j * (nx + 1); };
  std::vector<BulkSurfaceMesh::Point> nodes((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      nodes[id(i, j)] = {i == nx ? lx : lx * i / nx, j == ny ? ly : ly * j / ny};
    }
  }
  std::vector<BulkSurfaceMesh::Cell> cells;
  cells.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }

  std::vector<int> trace_map;
  for (int i = 0; i < nx; ++i) trace_map.push_back(id(i, 0));
  for (int j = 0; j < ny; ++j) trace_map.push_back(id(nx, j));
  for (int i = nx; i > 0; --i) trace_map.push_back(id(i, ny));
  for (int j = ny; j > 0; --j) trace_map.push_back(id(0, j));
  const int nb = static_cast<int>(trace_map.size());
  std::vector<BulkSurfaceMesh::BoundaryCell> edges(nb);
  for (int k = 0; k < nb; ++k) edges[k] = {k, (k + 1) % nb};

  return BulkSurfaceMesh(2, std::move(nodes), std::move(cells), std::move(edges),
                         std::move(trace_map));
}

Vector trace(const BulkSurfaceMesh& mesh, const Vector& bulk_values) {
  if (static_cast<std::size_t>(bulk_values.size()) != mesh.num_nodes()) {
    throw InvalidArgument("trace: bulk vector size does not match the mesh");
  }
  const auto& map = mesh.trace_map();
  Vector out(map.size());
  for (std::size_t k = 0; k < map.size(); ++k) out[k] = bulk_values[map[k]];
  return out;
}

Vector embed_boundary(const BulkSurfaceMesh& mesh, const Vector& boundary_values) {
  if (static_cast<std::size_t>(boundary_values.size()) != mesh.num_boundary_nodes()) {
    throw InvalidArgument("embed_boundary: boundary vector size does not match the mesh");
  }
  Vector out = Vector::Zero(mesh.num_nodes());
  const auto& map = mesh.trace_map();
  for (std::size_t k = 0; k < map.size(); ++k) out[map[k]] = boundary_values[k];
  return out;
}

}  // namespace cho
