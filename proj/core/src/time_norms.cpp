#include "cho/time_norms.hpp"

#include <algorithm>
#include <cmath>

#include "cho/forward.hpp"

namespace cho {

double l2_H(const CoupledOperators& ops, const TimeGrid& grid,
            const std::vector<PairField>& series) {
  if (static_cast<int>(series.size()) != grid.steps + 1) {
    throw InvalidArgument("time series length does not match the grid");
  }
  double s = 0.0;
  for (int n = 1; n <= grid.steps; ++n) s += grid.dt() * inner_H(ops, series[n], series[n]);
  return std::sqrt(s);
}

double y_norm(const CoupledOperators& ops, const TimeGrid& grid,
              const std::vector<PairField>& series) {
  if (static_cast<int>(series.size()) != grid.steps + 1) {
    throw InvalidArgument("time series length does not match the grid");
  }
  const double dt = grid.dt();
  double h1 = 0.0;
  double linf_v = norm_V(ops, series[0]);
  for (int n = 1; n <= grid.steps; ++n) {
    const PairField rate{(series[n].bulk - series[n - 1].bulk) / dt,
                         (series[n].boundary - series[n - 1].boundary) / dt};
    h1 += dt * (inner_H(ops, series[n], series[n]) + inner_H(ops, rate, rate));
    linf_v = std::max(linf_v, norm_V(ops, series[n]));
  }
  return std::sqrt(h1) + linf_v;
}

std::vector<PairField> phi_series(const StateTrajectory& trajectory) {
  std::vector<PairField> out;
  out.reserve(trajectory.snapshots.size());
  for (const auto& s : trajectory.snapshots) out.push_back(s.phi);
  return out;
}

std::vector<PairField> difference(const std::vector<PairField>& a,
                                  const std::vector<PairField>& b) {
  if (a.size() != b.size()) throw InvalidArgument("time series lengths differ");
  std::vector<PairField> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    out[k] = PairField{a[k].bulk - b[k].bulk, a[k].boundary - b[k].boundary};
  }
  return out;
}

double control_inner(const CoupledOperators& ops, const TimeGrid& grid, const ControlPair& a,
                     const ControlPair& b) {
  check_control_shape(ops, a, grid.steps);
  check_control_shape(ops, b, grid.steps);
  double s = 0.0;
  for (int k = 0; k < grid.steps; ++k) {
    s += a.bulk[k].dot(ops.mass_bulk * b.bulk[k]) +
         a.boundary[k].dot(ops.mass_boundary * b.boundary[k]);
  }
  return grid.dt() * s;
}

double control_norm(const CoupledOperators& ops, const TimeGrid& grid, const ControlPair& a) {
  return std::sqrt(control_inner(ops, grid, a, a));
}

}  // namespace cho
