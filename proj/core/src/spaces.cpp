#include "cho/spaces.hpp"

#include <array>
#include <cmath>

namespace cho {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void check_sizes(const CoupledOperators& ops, const PairField& field) {
  if (field.bulk.size() != ops.size() || field.boundary.size() != ops.boundary_size()) {
    throw InvalidArgument("pair field size does not match the operators");
  }
}

// Adds a symmetric local matrix; the (i,j) and (j,i) contributions are the
// same double so the assembled matrix is bitwise symmetric.
template <int K>
void scatter(Triplets& out, const std::array<int, K>& dofs,
             const std::array<std::array<double, K>, K>& local) {
  for (int a = 0; a < K; ++a) {
    out.emplace_back(dofs[a], dofs[a], local[a][a]);
    for (int b = a + 1; b < K; ++b) {
      out.emplace_back(dofs[a], dofs[b], local[a][b]);
      out.emplace_back(dofs[b], dofs[a], local[a][b]);
    }
  }
}

SparseMatrix from_triplets(Eigen::Index rows, const Triplets& t) {
  SparseMatrix m(rows, rows);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

Vector row_sums(const SparseMatrix& m) { return m * Vector::Ones(m.cols()); }

}  // namespace

PairField make_conforming(const BulkSurfaceMesh& mesh, Vector bulk) {
  Vector boundary = trace(mesh, bulk);
  return PairField{std::move(bulk), std::move(boundary)};
}

PairField zero_pair(const BulkSurfaceMesh& mesh) {
  return PairField{Vector::Zero(mesh.num_nodes()), Vector::Zero(mesh.num_boundary_nodes())};
}

bool is_conforming(const BulkSurfaceMesh& mesh, const PairField& field) {
  if (static_cast<std::size_t>(field.bulk.size()) != mesh.num_nodes() ||
      static_cast<std::size_t>(field.boundary.size()) != mesh.num_boundary_nodes()) {
    return false;
  }
  const auto& map = mesh.trace_map();
  for (std::size_t k = 0; k < map.size(); ++k) {
    if (field.boundary[k] != field.bulk[map[k]]) return false;
  }
  return true;
}

Vector CoupledOperators::trace(const Vector& bulk) const {
  if (bulk.size() != size()) throw InvalidArgument("trace: size mismatch");
  Vector out(trace_map.size());
  for (std::size_t k = 0; k < trace_map.size(); ++k) out[k] = bulk[trace_map[k]];
  return out;
}

Vector CoupledOperators::embed(const Vector& boundary) const {
  if (boundary.size() != boundary_size()) throw InvalidArgument("embed: size mismatch");
  Vector out = Vector::Zero(size());
  for (std::size_t k = 0; k < trace_map.size(); ++k) out[trace_map[k]] = boundary[k];
  return out;
}

PairField CoupledOperators::conforming(Vector bulk) const {
  Vector boundary = trace(bulk);
  return PairField{std::move(bulk), std::move(boundary)};
}

CoupledOperators assemble(const BulkSurfaceMesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  const auto nb = static_cast<Eigen::Index>(mesh.num_boundary_nodes());
  const auto& nodes = mesh.nodes();
  const auto& map = mesh.trace_map();

  Triplets mb, kb, ms, ks, msb;

  for (std::size_t c = 0; c < mesh.cells().size(); ++c) {
    const auto& cell = mesh.cells()[c];
    const double measure = mesh.cell_measure(c);
    if (mesh.dim() == 1) {
      const std::array<int, 2> dofs{cell[0], cell[1]};
      const double m0 = measure / 3.0, m1 = measure / 6.0, k = 1.0 / measure;
      scatter<2>(mb, dofs, {{{m0, m1}, {m1, m0}}});
      scatter<2>(kb, dofs, {{{k, -k}, {-k, k}}});
    } else {
      const std::array<int, 3> dofs{cell[0], cell[1], cell[2]};
      // Gradients of barycentric coordinates: grad l_a = rot(x_{a+2} - x_{a+1}) / (2A).
      std::array<std::array<double, 2>, 3> grad;
      for (int a = 0; a < 3; ++a) {
        const auto& p = nodes[dofs[(a + 1) % 3]];
        const auto& q = nodes[dofs[(a + 2) % 3]];
        grad[a] = {(p[1] - q[1]) / (2.0 * measure), (q[0] - p[0]) / (2.0 * measure)};
      }
      std::array<std::array<double, 3>, 3> mass{}, stiff{};
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          mass[a][b] = measure * (a == b ? 2.0 : 1.0) / 12.0;
          stiff[a][b] = measure * (grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1]);
        }
      }
      scatter<3>(mb, dofs, mass);
      scatter<3>(kb, dofs, stiff);
    }
  }

  for (std::size_t b = 0; b < mesh.boundary_cells().size(); ++b) {
    const auto& edge = mesh.boundary_cells()[b];
    if (mesh.dim() == 1) {
      // Point boundary: counting measure, no tangential direction.
      ms.emplace_back(map[edge[0]], map[edge[0]], 1.0);
      msb.emplace_back(edge[0], edge[0], 1.0);
      continue;
    }
    const double h = mesh.boundary_cell_measure(b);
    const double m0 = h / 3.0, m1 = h / 6.0, k = 1.0 / h;
    scatter<2>(ms, {map[edge[0]], map[edge[1]]}, {{{m0, m1}, {m1, m0}}});
    scatter<2>(ks, {map[edge[0]], map[edge[1]]}, {{{k, -k}, {-k, k}}});
    scatter<2>(msb, {edge[0], edge[1]}, {{{m0, m1}, {m1, m0}}});
  }

  CoupledOperators ops;
  ops.mass_bulk = from_triplets(n, mb);
  ops.stiffness_bulk = from_triplets(n, kb);
  ops.mass_surface = from_triplets(n, ms);
  ops.stiffness_surface = from_triplets(n, ks);
  ops.mass_boundary = from_triplets(nb, msb);
  ops.mass = ops.mass_bulk + ops.mass_surface;
  ops.stiffness = ops.stiffness_bulk + ops.stiffness_surface;
  ops.mass.makeCompressed();
  ops.stiffness.makeCompressed();
  ops.lumped_bulk = row_sums(ops.mass_bulk);
  ops.lumped_surface = row_sums(ops.mass_surface);
  ops.trace_map = map;
  ops.volume = mesh.volume();
  ops.surface = mesh.surface();
  return ops;
}

double mean(const CoupledOperators& ops, const PairField& field) {
  check_sizes(ops, field);
  const double bulk = ops.lumped_bulk.dot(field.bulk);
  const double boundary = (ops.mass_boundary * field.boundary).sum();
  return (bulk + boundary) / (ops.volume + ops.surface);
}

double inner_H(const CoupledOperators& ops, const PairField& a, const PairField& b) {
  check_sizes(ops, a);
  check_sizes(ops, b);
  return a.bulk.dot(ops.mass_bulk * b.bulk) + a.boundary.dot(ops.mass_boundary * b.boundary);
}

double norm_H(const CoupledOperators& ops, const PairField& field) {
  return std::sqrt(inner_H(ops, field, field));
}

double norm_V(const CoupledOperators& ops, const PairField& field) {
  check_sizes(ops, field);
  for (std::size_t k = 0; k < ops.trace_map.size(); ++k) {
    if (field.boundary[k] != field.bulk[ops.trace_map[k]]) {
      throw InvalidArgument("norm_V requires a trace-conforming pair");
    }
  }
  const double gradient = field.bulk.dot(ops.stiffness * field.bulk);
  return std::sqrt(inner_H(ops, field, field) + gradient);
}

}  // namespace cho
