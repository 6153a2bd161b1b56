#include "cho/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cho/time_norms.hpp"
#include "step_system.hpp"

namespace cho {

struct Linearization::Cache {
  detail::StepSystem system;
  // step_matrices[n] is the Jacobian at phi^n; n = 0 extends the sweep to t = 0.
  std::vector<SparseMatrix> step_matrices;
  // explicit_diagonals[n] = dN/dphi^n for the step n -> n+1.
  std::vector<Vector> explicit_diagonals;
  mutable std::vector<std::unique_ptr<detail::SparseLU>> forward_lu;
  mutable std::vector<std::unique_ptr<detail::SparseLU>> transpose_lu;

  explicit Cache(const ForwardProblem& p)
      : system(p.ops, p.potentials, p.options, p.params, p.grid.dt()) {}

  const detail::SparseLU& lu(int n, bool transposed) const {
    auto& slot = transposed ? transpose_lu[n] : forward_lu[n];
    if (!slot) {
      slot = std::make_unique<detail::SparseLU>();
      if (transposed) {
        SparseMatrix t = step_matrices[n].transpose();
        detail::factorize(*slot, t, n);
      } else {
        detail::factorize(*slot, step_matrices[n], n);
      }
    }
    return *slot;
  }
};

Linearization::Linearization(const ForwardProblem& problem, const StateTrajectory& base)
    : problem_(&problem), cache_(std::make_unique<Cache>(problem)) {
  const int steps = problem.grid.steps;
  if (static_cast<int>(base.snapshots.size()) != steps + 1) {
    throw InvalidArgument("base trajectory does not match the problem's time grid");
  }
  auto& c = *cache_;
  for (int n = 0; n <= steps; ++n) {
    const Vector& phi = base.snapshots[n].phi.bulk;
    c.step_matrices.push_back(c.system.jacobian(c.system.implicit_diagonal(phi)));
    c.explicit_diagonals.push_back(c.system.explicit_diagonal(phi));
  }
  c.forward_lu.resize(steps + 1);
  c.transpose_lu.resize(steps + 1);
}

Linearization::~Linearization() = default;
Linearization::Linearization(Linearization&&) noexcept = default;
Linearization& Linearization::operator=(Linearization&&) noexcept = default;

LinearizedTrajectory Linearization::solve(const ControlPair& h) const {
  const auto& ops = problem_->ops;
  const auto& params = problem_->params;
  const int steps = problem_->grid.steps;
  const double dt = problem_->grid.dt();
  const Eigen::Index n = ops.size();
  check_control_shape(ops, h, steps);

  LinearizedTrajectory out;
  out.psi.push_back(zero_pair(problem_->mesh));
  out.eta.push_back(zero_pair(problem_->mesh));
  Vector psi = Vector::Zero(n);
  Vector rhs(2 * n);
  for (int k = 1; k <= steps; ++k) {
    const Vector mass_psi = ops.mass * psi;
    rhs.head(n) = mass_psi / dt +
                  params.gamma * cache_->system.source(h.bulk[k - 1], h.boundary[k - 1]);
    rhs.tail(n) = (params.tau / dt) * mass_psi -
                  cache_->explicit_diagonals[k - 1].cwiseProduct(psi);
    const Vector x = cache_->lu(k, false).solve(rhs);
    psi = x.head(n);
    out.psi.push_back(ops.conforming(psi));
    out.eta.push_back(ops.conforming(x.tail(n)));
  }
  return out;
}

std::vector<Vector> Linearization::transpose_solve(
    const std::vector<Vector>& state_sources) const {
  const auto& ops = problem_->ops;
  const auto& params = problem_->params;
  const int steps = problem_->grid.steps;
  const double dt = problem_->grid.dt();
  const Eigen::Index n = ops.size();
  if (static_cast<int>(state_sources.size()) != steps + 1) {
    throw InvalidArgument("adjoint sources must cover every time node");
  }

  std::vector<Vector> lambda(steps + 1);
  Vector carry = Vector::Zero(n);  // B_{k+1}^T lambda_{k+1}, acting on psi_k
  Vector rhs = Vector::Zero(2 * n);
  for (int k = steps; k >= 0; --k) {
    rhs.head(n) = state_sources[k] + carry;
    rhs.tail(n).setZero();
    lambda[k] = cache_->lu(k, true).solve(rhs);
    const auto a = lambda[k].head(n);
    const auto b = lambda[k].tail(n);
    if (k > 0) {
      carry = ops.mass * ((1.0 / dt) * a + (params.tau / dt) * b) -
              cache_->explicit_diagonals[k - 1].cwiseProduct(b);
    }
  }
  return lambda;
}

LinearizedTrajectory linearized_solve(const ForwardProblem& problem,
                                      const StateTrajectory& base, const ControlPair& h) {
  return Linearization(problem, base).solve(h);
}

namespace {

std::vector<PairField> remainder(const StateTrajectory& perturbed, const StateTrajectory& base,
                                 const LinearizedTrajectory& lin, double s) {
  std::vector<PairField> out(base.snapshots.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& a = perturbed.snapshots[k].phi;
    const auto& b = base.snapshots[k].phi;
    out[k] = PairField{a.bulk - b.bulk - s * lin.psi[k].bulk,
                       a.boundary - b.boundary - s * lin.psi[k].boundary};
  }
  return out;
}

void check_halving(const std::vector<double>& scales) {
  if (scales.size() < 2) throw InvalidArgument("need at least two scales");
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (!(scales[k] > 0.0)) throw InvalidArgument("scales must be positive");
    if (k > 0 && scales[k] != 0.5 * scales[k - 1]) {
      throw InvalidArgument("scales must be successive halvings");
    }
  }
}

}  // namespace

TaylorResult taylor_test(const ForwardProblem& problem, const ControlPair& u,
                         const ControlPair& h, const std::vector<double>& scales) {
  check_halving(scales);
  const StateTrajectory base = solve(problem, u);
  const LinearizedTrajectory lin = linearized_solve(problem, base, h);
  const double psi_norm = y_norm(problem.ops, problem.grid, lin.psi);

  TaylorResult result;
  result.scales = scales;
  bool exact = true;
  for (double s : scales) {
    ControlPair shifted = u;
    shifted.axpy(s, h);
    const StateTrajectory perturbed = solve(problem, shifted);
    const double rho = y_norm(problem.ops, problem.grid, remainder(perturbed, base, lin, s));
    result.remainders.push_back(rho);
    // Round-off floor relative to the first-order term.
    if (rho > 1e-9 * std::max(s * psi_norm, std::numeric_limits<double>::min())) exact = false;
  }
  result.exact = exact;
  for (std::size_t k = 0; k + 1 < scales.size(); ++k) {
    const double a = result.remainders[k], b = result.remainders[k + 1];
    result.orders.push_back(exact || b == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                              : std::log2(a / b));
  }
  return result;
}

DependenceResult continuous_dependence(const ForwardProblem& problem, const ControlPair& u,
                                       const ControlPair& h, const std::vector<double>& scales) {
  if (scales.empty()) throw InvalidArgument("need at least one scale");
  const StateTrajectory base = solve(problem, u);
  const auto base_phi = phi_series(base);
  const double h_norm = control_norm(problem.ops, problem.grid, h);
  if (!(h_norm > 0.0)) throw InvalidArgument("direction must be nonzero");

  DependenceResult result;
  result.scales = scales;
  for (double s : scales) {
    ControlPair shifted = u;
    shifted.axpy(s, h);
    const auto delta = difference(phi_series(solve(problem, shifted)), base_phi);
    result.ratios.push_back(y_norm(problem.ops, problem.grid, delta) / (std::abs(s) * h_norm));
  }
  const auto [lo, hi] = std::minmax_element(result.ratios.begin(), result.ratios.end());
  result.spread = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
  return result;
}

}  // namespace cho
