#include "cho/control_types.hpp"

#include <algorithm>
#include <cmath>

namespace cho {

ControlPair ControlPair::constant(Eigen::Index n, Eigen::Index nb, int slabs, double bulk_value,
                                  double boundary_value) {
  ControlPair u;
  u.bulk.assign(slabs, Vector::Constant(n, bulk_value));
  u.boundary.assign(slabs, Vector::Constant(nb, boundary_value));
  return u;
}

ControlPair ControlPair::zeros_like(const ControlPair& other) {
  ControlPair u = other;
  for (auto& v : u.bulk) v.setZero();
  for (auto& v : u.boundary) v.setZero();
  return u;
}

double ControlPair::sup_norm() const {
  double m = 0.0;
  for (const auto& v : bulk) m = std::max(m, v.size() ? v.cwiseAbs().maxCoeff() : 0.0);
  for (const auto& v : boundary) m = std::max(m, v.size() ? v.cwiseAbs().maxCoeff() : 0.0);
  return m;
}

bool ControlPair::finite() const {
  auto ok = [](const Vector& v) { return v.allFinite(); };
  return std::all_of(bulk.begin(), bulk.end(), ok) &&
         std::all_of(boundary.begin(), boundary.end(), ok);
}

ControlPair& ControlPair::axpy(double a, const ControlPair& other) {
  if (other.bulk.size() != bulk.size() || other.boundary.size() != boundary.size()) {
    throw InvalidArgument("control pairs have different slab counts");
  }
  for (std::size_t k = 0; k < bulk.size(); ++k) bulk[k] += a * other.bulk[k];
  for (std::size_t k = 0; k < boundary.size(); ++k) boundary[k] += a * other.boundary[k];
  return *this;
}

ControlPair ControlPair::scaled(double a) const {
  ControlPair u = *this;
  for (auto& v : u.bulk) v *= a;
  for (auto& v : u.boundary) v *= a;
  return u;
}

ControlPair operator+(ControlPair a, const ControlPair& b) { return a.axpy(1.0, b), a; }
ControlPair operator-(ControlPair a, const ControlPair& b) { return a.axpy(-1.0, b), a; }

void check_control_shape(const CoupledOperators& ops, const ControlPair& u, int slabs) {
  if (u.slabs() != slabs || static_cast<int>(u.boundary.size()) != slabs) {
    throw InvalidArgument("control slab count does not match the time grid");
  }
  for (int k = 0; k < slabs; ++k) {
    if (u.bulk[k].size() != ops.size() || u.boundary[k].size() != ops.boundary_size()) {
      throw InvalidArgument("control slab size does not match the mesh");
    }
  }
}

double BoxBounds::sup_bound() const { return std::max(lower.sup_norm(), upper.sup_norm()); }

bool BoxBounds::consistent() const {
  if (lower.bulk.size() != upper.bulk.size() || lower.boundary.size() != upper.boundary.size()) {
    return false;
  }
  for (std::size_t k = 0; k < lower.bulk.size(); ++k) {
    if ((lower.bulk[k].array() > upper.bulk[k].array()).any()) return false;
  }
  for (std::size_t k = 0; k < lower.boundary.size(); ++k) {
    if ((lower.boundary[k].array() > upper.boundary[k].array()).any()) return false;
  }
  return true;
}

bool CostSpec::all_zero() const {
  return std::all_of(alpha.begin(), alpha.end(), [](double a) { return a == 0.0; });
}

}  // namespace cho
