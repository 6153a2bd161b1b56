#pragma once

#include <memory>
#include <vector>

#include "cho/forward.hpp"

namespace cho {

/// Solution (psi, eta) of the linearized state system around a base
/// trajectory, for one control direction h. psi[0] = 0 and eta[0] = 0.
struct LinearizedTrajectory {
  std::vector<PairField> psi;
  std::vector<PairField> eta;
};

/// The step-by-step derivative of the discrete forward map around `base`.
/// Each step matrix is the exact Newton Jacobian of the forward step, so the
/// linearization is the discrete derivative of the control-to-state map and
/// its transpose sweep is the discrete adjoint. Factorizations are cached, so
/// one instance serves many directions.
class Linearization {
 public:
  Linearization(const ForwardProblem& problem, const StateTrajectory& base);
  ~Linearization();
  Linearization(Linearization&&) noexcept;
  Linearization& operator=(Linearization&&) noexcept;
  Linearization(const Linearization&) = delete;
  Linearization& operator=(const Linearization&) = delete;

  LinearizedTrajectory solve(const ControlPair& h) const;

  /// Backward sweep A_n^T lambda_n = [g_n; 0] + B_{n+1}^T lambda_{n+1} for
  /// n = N..0 (A_0 is the step matrix frozen at phi^0). `state_sources` has
  /// N + 1 entries; returns the stacked multipliers lambda_0..lambda_N.
  std::vector<Vector> transpose_solve(const std::vector<Vector>& state_sources) const;

  const ForwardProblem& problem() const noexcept { return *problem_; }

 private:
  struct Cache;
  const ForwardProblem* problem_;
  std::unique_ptr<Cache> cache_;
};

LinearizedTrajectory linearized_solve(const ForwardProblem& problem,
                                      const StateTrajectory& base, const ControlPair& h);

struct TaylorResult {
  std::vector<double> scales;
  /// || S(u + s h) - S(u) - s psi_h || in the discrete H1(H) and Linf(V) norm
  std::vector<double> remainders;
  /// log2(rho(s) / rho(s/2)) for consecutive scales
  std::vector<double> orders;
  /// remainders at round-off level (affine control-to-state map or h = 0)
  bool exact = false;
};

/// Scales must be successive halvings, e.g. {1, 1/2, 1/4, 1/8}.
TaylorResult taylor_test(const ForwardProblem& problem, const ControlPair& u,
                         const ControlPair& h, const std::vector<double>& scales);

struct DependenceResult {
  std::vector<double> scales;
  /// || S(u + s h) - S(u) ||_Y / || s h ||_{L2(H)}
  std::vector<double> ratios;
  /// (max - min) / max over the ratios
  double spread = 0.0;
};

DependenceResult continuous_dependence(const ForwardProblem& problem, const ControlPair& u,
                                       const ControlPair& h, const std::vector<double>& scales);

}  // namespace cho
