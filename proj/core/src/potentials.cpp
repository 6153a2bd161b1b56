#include "cho/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace cho {

namespace {

// d^order/dr^order of sum_k c_k r^k
double polynomial(const std::vector<double>& c, double r, int order) {
  double result = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= order; --k) {
    double factor = 1.0;
    for (int j = 0; j < order; ++j) factor *= (k - j);
    result = result * r + factor * c[k];
  }
  return result;
}

constexpr double kCompatGridHalfWidth = 10.0;
constexpr int kGridPoints = 1000;

std::vector<double> interior_grid(const Potential& p) {
  std::vector<double> grid(kGridPoints);
  for (int k = 0; k < kGridPoints; ++k) {
    grid[k] = p.bounded_domain()
                  ? -1.0 + (2.0 * k + 1.0) / kGridPoints
                  : -kCompatGridHalfWidth + 2.0 * kCompatGridHalfWidth * k / (kGridPoints - 1);
  }
  return grid;
}

}  // namespace

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::regular: return "regular";
    case PotentialKind::logarithmic: return "logarithmic";
    case PotentialKind::custom: return "custom";
  }
  return "unknown";
}

Potential::Potential(PotentialKind kind, double c1, std::vector<double> convex,
                     std::vector<double> concave)
    : kind_(kind), c1_(c1), convex_(std::move(convex)), concave_(std::move(concave)) {}

Potential Potential::regular() { return Potential(PotentialKind::regular, 0.0, {}, {}); }

Potential Potential::logarithmic(double c1) {
  if (!(c1 > 1.0)) throw InvalidArgument("logarithmic potential needs c1 > 1");
  return Potential(PotentialKind::logarithmic, c1, {}, {});
}

Potential Potential::custom(std::vector<double> convex_coefficients,
                            std::vector<double> concave_coefficients) {
  convex_coefficients.resize(std::max<std::size_t>(convex_coefficients.size(), 2), 0.0);
  if (convex_coefficients[0] != 0.0 || convex_coefficients[1] != 0.0) {
    throw InvalidArgument("custom potential: beta_hat(0) and beta(0) must vanish");
  }
  Potential p(PotentialKind::custom, 0.0, std::move(convex_coefficients),
              std::move(concave_coefficients));
  for (double r : interior_grid(p)) {
    if (p.beta_prime(r) < -1e-12) {
      throw InvalidArgument("custom potential: beta is not nondecreasing");
    }
  }
  return p;
}

bool Potential::in_domain(double r) const noexcept {
  if (!std::isfinite(r)) return false;
  return !bounded_domain() || std::abs(r) < 1.0;
}

void Potential::require_domain(double r) const {
  if (!in_domain(r)) {
    throw DomainError("logarithmic potential evaluated outside (-1, 1)", r);
  }
}

double Potential::beta_hat(double r) const {
  require_domain(r);
  switch (kind_) {
    case PotentialKind::regular: return 0.25 * r * r * r * r;
    case PotentialKind::logarithmic:
      return (1.0 + r) * std::log1p(r) + (1.0 - r) * std::log1p(-r);
    case PotentialKind::custom: return polynomial(convex_, r, 0);
  }
  return 0.0;
}

double Potential::beta(double r) const {
  require_domain(r);
  switch (kind_) {
    case PotentialKind::regular: return r * r * r;
    case PotentialKind::logarithmic: return std::log1p(r) - std::log1p(-r);
    case PotentialKind::custom: return polynomial(convex_, r, 1);
  }
  return 0.0;
}

double Potential::beta_prime(double r) const {
  require_domain(r);
  switch (kind_) {
    case PotentialKind::regular: return 3.0 * r * r;
    case PotentialKind::logarithmic: return 2.0 / ((1.0 - r) * (1.0 + r));
    case PotentialKind::custom: return polynomial(convex_, r, 2);
  }
  return 0.0;
}

double Potential::pi_hat(double r) const {
  switch (kind_) {
    case PotentialKind::regular: return 0.25 - 0.5 * r * r;
    case PotentialKind::logarithmic: return -c1_ * r * r;
    case PotentialKind::custom: return polynomial(concave_, r, 0);
  }
  return 0.0;
}

double Potential::pi(double r) const {
  switch (kind_) {
    case PotentialKind::regular: return -r;
    case PotentialKind::logarithmic: return -2.0 * c1_ * r;
    case PotentialKind::custom: return polynomial(concave_, r, 1);
  }
  return 0.0;
}

double Potential::pi_prime(double r) const {
  switch (kind_) {
    case PotentialKind::regular: return -1.0;
    case PotentialKind::logarithmic: return -2.0 * c1_;
    case PotentialKind::custom: return polynomial(concave_, r, 2);
  }
  return 0.0;
}

double Potential::eval(double r, int order) const {
  require_domain(r);
  switch (order) {
    case 0: return beta_hat(r) + pi_hat(r);
    case 1: return beta(r) + pi(r);
    case 2: return beta_prime(r) + pi_prime(r);
    case 3:
      switch (kind_) {
        case PotentialKind::regular: return 6.0 * r;
        case PotentialKind::logarithmic: {
          const double s = (1.0 - r) * (1.0 + r);
          return 4.0 * r / (s * s);
        }
        case PotentialKind::custom:
          return polynomial(convex_, r, 3) + polynomial(concave_, r, 3);
      }
      break;
    default: break;
  }
  throw InvalidArgument("potential derivative order must be in 0..3");
}

double Potential::resolvent(double eps, double r) const {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("Yosida parameter must lie in (0, 1)");
  if (!std::isfinite(r)) throw InvalidArgument("resolvent of a non-finite argument");
  if (r == 0.0) return 0.0;

  // beta(0) = 0 and monotonicity put J between 0 and r.
  double lo = std::min(0.0, r);
  double hi = std::max(0.0, r);
  if (bounded_domain()) {
    const double edge = std::nextafter(1.0, 0.0);
    lo = std::max(lo, -edge);
    hi = std::min(hi, edge);
  }
  auto g = [&](double j) { return j + eps * beta(j) - r; };

  double j = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double value = g(j);
    if (value == 0.0) return j;
    if (value > 0.0) hi = j; else lo = j;
    if (hi - lo <= 1e-12 * std::abs(j)) break;
    double next = j - value / (1.0 + eps * beta_prime(j));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - j);
    j = next;
    if (step <= 1e-13 * std::abs(j) && std::abs(g(j)) <= 1e-12 * std::max(1.0, std::abs(r))) {
      break;
    }
  }
  return j;
}

double Potential::yosida_beta(double eps, double r) const {
  const double j = resolvent(eps, r);
  // beta(J) loses accuracy where beta is stiff; (r - J) / eps loses it where
  // eps * beta' is small.
  if (eps * beta_prime(j) >= 1.0) return (r - j) / eps;
  return beta(j);
}

double Potential::yosida_hat(double eps, double r) const {
  const double j = resolvent(eps, r);
  const double b = eps * beta_prime(j) >= 1.0 ? (r - j) / eps : beta(j);
  return 0.5 * eps * b * b + beta_hat(j);
}

double Potential::yosida_beta_prime(double eps, double r) const {
  const double bp = beta_prime(resolvent(eps, r));
  return bp / (1.0 + eps * bp);
}

EffectivePotential::EffectivePotential(const Potential& potential, double eps)
    : potential_(potential), eps_(eps) {
  if (eps < 0.0 || eps >= 1.0) throw InvalidArgument("Yosida parameter must be 0 or in (0, 1)");
}

double EffectivePotential::value(double r) const {
  if (eps_ == 0.0) return potential_.eval(r, 0);
  return potential_.yosida_hat(eps_, r) + potential_.pi_hat(r);
}

double EffectivePotential::first(double r) const {
  return convex_first(r) + concave_first(r);
}

double EffectivePotential::second(double r) const {
  return convex_second(r) + concave_second(r);
}

double EffectivePotential::convex_first(double r) const {
  return eps_ == 0.0 ? potential_.beta(r) : potential_.yosida_beta(eps_, r);
}

double EffectivePotential::convex_second(double r) const {
  return eps_ == 0.0 ? potential_.beta_prime(r) : potential_.yosida_beta_prime(eps_, r);
}

double EffectivePotential::concave_first(double r) const { return potential_.pi(r); }

double EffectivePotential::concave_second(double r) const { return potential_.pi_prime(r); }

PotentialPair make_potential_pair(Potential bulk, Potential boundary) {
  if (bulk.bounded_domain() && !boundary.bounded_domain()) {
    throw ValidationError("boundary potential domain must be contained in the bulk domain");
  }
  double c_star = 0.0;
  for (double r : interior_grid(boundary)) {
    c_star = std::max(c_star, std::abs(bulk.beta(r)) / (std::abs(boundary.beta(r)) + 1.0));
  }
  if (!std::isfinite(c_star)) {
    throw ValidationError("compatibility constant is not finite: boundary potential must dominate");
  }
  return PotentialPair{std::move(bulk), std::move(boundary), c_star};
}

MeanValueReport check_mean_value_condition(const PotentialPair& pair, double m0, double M,
                                           double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("mean-value condition needs gamma > 0");
  MeanValueReport report;
  report.rho = M / gamma;
  report.lower = -std::max(-m0, 0.0) - report.rho;
  report.upper = std::max(m0, 0.0) + report.rho;
  report.pass = true;
  if (pair.boundary.bounded_domain()) {
    if (!(report.upper < 1.0)) {
      report.pass = false;
      report.violated_endpoint = report.upper;
    } else if (!(report.lower > -1.0)) {
      report.pass = false;
      report.violated_endpoint = report.lower;
    }
  }
  return report;
}

std::optional<double> separation_r0(const PotentialPair& pair, double N, double phi0_sup) {
  if (!(phi0_sup < 1.0)) throw InvalidArgument("separation needs sup|phi0| < 1");
  if (!pair.boundary.bounded_domain()) return std::nullopt;

  auto holds = [&](double r) {
    return pair.bulk.eval(r, 1) >= N && pair.boundary.eval(r, 1) >= N &&
           pair.bulk.eval(-r, 1) <= -N && pair.boundary.eval(-r, 1) <= -N;
  };

  const double start = std::max(phi0_sup, 0.0);
  const double width = 1.0 - start;
  // Uniform samples plus a geometric cluster toward 1 where F' diverges.
  std::vector<double> samples;
  constexpr int kUniform = 4000;
  for (int k = 0; k < kUniform; ++k) samples.push_back(start + width * (0.999 * k / kUniform));
  for (int k = 30; k <= 150; ++k) {
    const double r = 1.0 - width * std::pow(10.0, -0.1 * k);
    if (r < 1.0) samples.push_back(r);
  }

  std::ptrdiff_t last_fail = -1;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!holds(samples[k])) last_fail = static_cast<std::ptrdiff_t>(k);
  }
  if (last_fail < 0) return start;
  if (static_cast<std::size_t>(last_fail) + 1 == samples.size()) {
    throw ValidationError("no separation radius below 1 for the given bound N");
  }
  double lo = samples[last_fail];
  double hi = samples[last_fail + 1];
  while (hi - lo > 1e-15 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (holds(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace cho
