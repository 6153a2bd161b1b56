#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cho/common.hpp"

namespace cho {

enum class PotentialKind { regular, logarithmic, custom };

std::string to_string(PotentialKind kind);

/// Double-well potential split as F = beta_hat + pi_hat with beta_hat convex,
/// beta_hat(0) = 0, and pi_hat smooth.
///
///  - regular:      F = (r^2 - 1)^2 / 4,  beta_hat = r^4/4,  pi_hat = 1/4 - r^2/2
///  - logarithmic:  F = (1+r)ln(1+r) + (1-r)ln(1-r) - c1 r^2  on (-1, 1)
///  - custom:       beta_hat and pi_hat given as polynomial coefficients
///                  (index = power), defined on all of R
///
/// Logarithmic evaluations at |r| >= 1 throw DomainError; nothing is clamped.
class Potential {
 public:
  static Potential regular();
  static Potential logarithmic(double c1);
  static Potential custom(std::vector<double> convex_coefficients,
                          std::vector<double> concave_coefficients);

  PotentialKind kind() const noexcept { return kind_; }
  double c1() const noexcept { return c1_; }
  const std::vector<double>& convex_coefficients() const noexcept { return convex_; }
  const std::vector<double>& concave_coefficients() const noexcept { return concave_; }

  /// True when D(beta) = (-1, 1); false when D(beta) = R.
  bool bounded_domain() const noexcept { return kind_ == PotentialKind::logarithmic; }
  bool in_domain(double r) const noexcept;

  /// F^(order)(r) for order 0..3.
  double eval(double r, int order) const;

  double beta_hat(double r) const;
  double beta(double r) const;
  double beta_prime(double r) const;
  double pi_hat(double r) const;
  double pi(double r) const;
  double pi_prime(double r) const;

  /// J_eps(r): the unique J with J + eps * beta(J) = r. Safeguarded Newton
  /// with bisection fallback, relative tolerance 1e-12.
  double resolvent(double eps, double r) const;
  /// Yosida approximation beta_eps(r) = (r - J_eps(r)) / eps.
  double yosida_beta(double eps, double r) const;
  /// beta_hat_eps(r) = |r - J_eps(r)|^2 / (2 eps) + beta_hat(J_eps(r)).
  double yosida_hat(double eps, double r) const;
  /// Derivative of beta_eps.
  double yosida_beta_prime(double eps, double r) const;

 private:
  Potential(PotentialKind kind, double c1, std::vector<double> convex,
            std::vector<double> concave);
  void require_domain(double r) const;

  PotentialKind kind_;
  double c1_ = 0.0;
  std::vector<double> convex_;
  std::vector<double> concave_;
};

/// F with beta optionally replaced by its Yosida approximation (eps > 0).
/// This is what the solvers evaluate nodally.
class EffectivePotential {
 public:
  EffectivePotential(const Potential& potential, double eps);

  const Potential& base() const noexcept { return potential_; }
  double eps() const noexcept { return eps_; }
  /// Singular at +-1 (logarithmic kind without regularization).
  bool bounded() const noexcept { return potential_.bounded_domain() && eps_ == 0.0; }

  double value(double r) const;
  double first(double r) const;
  double second(double r) const;
  double convex_first(double r) const;
  double convex_second(double r) const;
  double concave_first(double r) const;
  double concave_second(double r) const;

 private:
  Potential potential_;
  double eps_;
};

/// Bulk and boundary potentials with the sampled compatibility constant C*
/// of |beta(r)| <= C* (|beta_G(r)| + 1).
struct PotentialPair {
  Potential bulk;
  Potential boundary;
  double compat_constant = 0.0;
};

/// Validates D(beta_G) in D(beta) and measures C* on a 1000-point grid of
/// int D(beta_G) (or [-10, 10] when unbounded). Throws ValidationError on an
/// incompatible pair.
PotentialPair make_potential_pair(Potential bulk, Potential boundary);

struct MeanValueReport {
  bool pass = false;
  double rho = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// Endpoint outside int D(beta_G) when the check fails.
  std::optional<double> violated_endpoint;
};

/// Mean-value condition: with rho = M / gamma, the interval
/// [-m0^- - rho, m0^+ + rho] must lie in int D(beta_G).
MeanValueReport check_mean_value_condition(const PotentialPair& pair, double m0, double M,
                                           double gamma);

/// Smallest r0 >= phi0_sup with F', F_G' >= N on [r0, 1) and F', F_G' <= -N
/// on (-1, -r0]. Returns nullopt (not applicable) for potentials on R.
/// Throws InvalidArgument if phi0_sup >= 1 and ValidationError if no such
/// r0 exists.
std::optional<double> separation_r0(const PotentialPair& pair, double N, double phi0_sup);

}  // namespace cho
