#pragma once

#include "cho/common.hpp"

namespace cho {

/// Uniform grid t_n = n * T / N, n = 0..N.
struct TimeGrid {
  double final_time = 1.0;
  int steps = 1;

  TimeGrid() = default;
  TimeGrid(double T, int N) : final_time(T), steps(N) {
    if (!(T > 0.0)) throw InvalidArgument("final time must be positive");
    if (N < 1) throw InvalidArgument("time grid needs at least one step");
  }

  double dt() const noexcept { return final_time / steps; }
  double t(int n) const noexcept { return n == steps ? final_time : n * dt(); }
};

}  // namespace cho
