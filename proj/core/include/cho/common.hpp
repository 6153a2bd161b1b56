#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace cho {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Bad input to a library routine (wrong sizes, non-positive lengths, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a singular potential.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, double value, std::ptrdiff_t node = -1)
      : std::domain_error(what), value_(value), node_(node) {}

  double value() const noexcept { return value_; }
  /// Offending node, or -1 when not attached to a mesh node.
  std::ptrdiff_t node() const noexcept { return node_; }

 private:
  double value_;
  std::ptrdiff_t node_;
};

/// Structural assumption violated (mean-value condition, infeasible box, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nonlinear or linear solver failure inside a time loop.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int step, double residual)
      : std::runtime_error(what), step_(step), residual_(residual) {}

  int step() const noexcept { return step_; }
  double residual() const noexcept { return residual_; }

 private:
  int step_;
  double residual_;
};

}  // namespace cho
