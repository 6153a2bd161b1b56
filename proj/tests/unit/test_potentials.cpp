#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cho/potentials.hpp"
#include "oracles.hpp"

namespace cho {
namespace {

Potential identity_beta() { return Potential::custom({0.0, 0.0, 0.5}, {}); }

TEST(Potentials, RegularValues) {
  const auto f = Potential::regular();
  EXPECT_DOUBLE_EQ(f.eval(0.0, 0), 0.25);
  EXPECT_DOUBLE_EQ(f.eval(1.0, 0), 0.0);
  EXPECT_DOUBLE_EQ(f.eval(-1.0, 0), 0.0);
  EXPECT_DOUBLE_EQ(f.eval(2.0, 1), 6.0);
  EXPECT_FALSE(f.bounded_domain());
}

TEST(Potentials, LogarithmicValues) {
  const auto f = Potential::logarithmic(2.0);
  EXPECT_DOUBLE_EQ(f.eval(0.0, 0), 0.0);
  EXPECT_TRUE(f.bounded_domain());
  EXPECT_THROW(Potential::logarithmic(1.0), InvalidArgument);
}

TEST(Potentials, LogarithmicDomainViolationThrows) {
  const auto f = Potential::logarithmic(2.0);
  for (double r : {1.0, -1.0, 1.5, std::nan("")}) {
    for (int order = 0; order <= 3; ++order) {
      EXPECT_THROW(f.eval(r, order), DomainError) << r << " " << order;
    }
  }
  EXPECT_THROW(f.eval(0.0, 4), InvalidArgument);
}

TEST(Potentials, CustomValidation) {
  EXPECT_THROW(Potential::custom({1.0, 0.0, 1.0}, {}), InvalidArgument);
  EXPECT_THROW(Potential::custom({0.0, 0.5, 1.0}, {}), InvalidArgument);
  EXPECT_THROW(Potential::custom({0.0, 0.0, -1.0}, {}), InvalidArgument);
  EXPECT_NO_THROW(Potential::custom({0.0, 0.0, 0.0, 0.0, 0.25}, {0.25, 0.0, -0.5}));
}

TEST(Potentials, SplitSumsToF) {
  const std::vector<Potential> kinds = {Potential::regular(), Potential::logarithmic(2.0),
                                        Potential::logarithmic(3.5),
                                        Potential::custom({0, 0, 0, 0, 0.25}, {0.25, 0, -0.5})};
  for (const auto& f : kinds) {
    EXPECT_EQ(f.beta(0.0), 0.0);
    EXPECT_EQ(f.beta_hat(0.0), 0.0);
    for (double r = -0.95; r < 0.96; r += 0.05) {
      EXPECT_NEAR(f.eval(r, 0), f.beta_hat(r) + f.pi_hat(r), 1e-14);
      EXPECT_NEAR(f.eval(r, 1), f.beta(r) + f.pi(r), 1e-13);
      EXPECT_NEAR(f.eval(r, 2), f.beta_prime(r) + f.pi_prime(r), 1e-12);
    }
  }
}

TEST(Potentials, DerivativesMatchFiniteDifferences) {
  const std::vector<Potential> kinds = {Potential::regular(), Potential::logarithmic(2.0),
                                        Potential::custom({0, 0, 0.5, 0, 0.1}, {0, 0, -0.3})};
  for (const auto& f : kinds) {
    for (double r = -0.9; r < 0.91; r += 0.1) {
      for (int order = 1; order <= 3; ++order) {
        const double h = 1e-5;
        const double fd =
            oracle::central_difference([&](double x) { return f.eval(x, order - 1); }, r, h);
        const double exact = f.eval(r, order);
        EXPECT_LE(std::abs(fd - exact), 1e-6 * std::max(1.0, std::abs(exact)))
            << to_string(f.kind()) << " r=" << r << " order=" << order;
      }
    }
  }
}

TEST(Potentials, BetaMonotone) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-0.999, 0.999);
  for (const auto& f : {Potential::regular(), Potential::logarithmic(2.0)}) {
    for (int i = 0; i < 1000; ++i) {
      const double a = dist(rng), b = dist(rng);
      EXPECT_GE((f.beta(a) - f.beta(b)) * (a - b), 0.0);
      for (double eps : {0.5, 0.1, 1e-3}) {
        const double ya = f.yosida_beta(eps, 3.0 * a), yb = f.yosida_beta(eps, 3.0 * b);
        EXPECT_GE((ya - yb) * (a - b), 0.0);
        EXPECT_LE(std::abs(ya - yb), 3.0 * std::abs(a - b) / eps * (1.0 + 1e-10));
      }
    }
  }
}

TEST(Potentials, YosidaExamples) {
  for (double eps : {0.9, 0.5, 0.1, 1e-4}) {
    EXPECT_EQ(Potential::regular().yosida_beta(eps, 0.0), 0.0);
    EXPECT_EQ(Potential::logarithmic(2.0).yosida_beta(eps, 0.0), 0.0);
    EXPECT_EQ(Potential::regular().yosida_hat(eps, 0.0), 0.0);
  }
  const auto id = identity_beta();
  EXPECT_NEAR(id.yosida_beta(0.5, 3.0), 2.0, 1e-12);
  for (double r : {-4.0, -0.3, 0.7, 10.0}) {
    for (double eps : {0.1, 0.5}) {
      EXPECT_NEAR(id.yosida_beta(eps, r), r / (1.0 + eps), 1e-12 * std::abs(r));
      EXPECT_NEAR(id.yosida_hat(eps, r), r * r / (2.0 * (1.0 + eps)), 1e-12 * r * r);
      EXPECT_NEAR(id.yosida_beta_prime(eps, r), 1.0 / (1.0 + eps), 1e-12);
    }
  }
}

TEST(Potentials, YosidaDefinedOutsideLogDomain) {
  const auto f = Potential::logarithmic(2.0);
  for (double r : {-5.0, -1.0, 1.0, 2.0, 100.0}) {
    const double y = f.yosida_beta(0.1, r);
    EXPECT_TRUE(std::isfinite(y));
    const double j = f.resolvent(0.1, r);
    EXPECT_LT(std::abs(j), 1.0);
    EXPECT_NEAR(y, (r - j) / 0.1, 1e-9 * std::max(1.0, std::abs(y)));
  }
}

TEST(Potentials, YosidaBoundsAndConvergence) {
  for (const auto& f : {Potential::regular(), Potential::logarithmic(2.0)}) {
    for (double r = -0.98; r < 0.99; r += 0.02) {
      double previous = std::numeric_limits<double>::infinity();
      for (double eps : {1e-1, 1e-2, 1e-3}) {
        const double yb = f.yosida_beta(eps, r);
        EXPECT_LE(std::abs(yb), std::abs(f.beta(r)) + 1e-14);
        const double yh = f.yosida_hat(eps, r);
        EXPECT_GE(yh, -1e-15);
        EXPECT_LE(yh, f.beta_hat(r) + 1e-14);
        const double err = std::abs(yb - f.beta(r));
        if (std::abs(r) > 1e-12) EXPECT_LT(err, previous) << r << " " << eps;
        previous = err;
      }
    }
  }
}

TEST(Potentials, YosidaDerivativeMatchesDifference) {
  for (const auto& f : {Potential::regular(), Potential::logarithmic(2.0)}) {
    for (double r : {-2.0, -0.7, 0.1, 0.95, 3.0}) {
      const double fd =
          oracle::central_difference([&](double x) { return f.yosida_beta(0.05, x); }, r, 1e-5);
      EXPECT_NEAR(f.yosida_beta_prime(0.05, r), fd, 1e-6 * std::max(1.0, std::abs(fd)));
      const double fd_hat =
          oracle::central_difference([&](double x) { return f.yosida_hat(0.05, x); }, r, 1e-5);
      EXPECT_NEAR(f.yosida_beta(0.05, r), fd_hat, 1e-6 * std::max(1.0, std::abs(fd_hat)));
    }
  }
}

TEST(Potentials, EffectivePotentialSwitchesOnEps) {
  const EffectivePotential exact(Potential::logarithmic(2.0), 0.0);
  const EffectivePotential reg(Potential::logarithmic(2.0), 0.01);
  EXPECT_TRUE(exact.bounded());
  EXPECT_FALSE(reg.bounded());
  EXPECT_THROW(exact.first(1.2), DomainError);
  EXPECT_TRUE(std::isfinite(reg.first(1.2)));
  EXPECT_NEAR(exact.first(0.3), Potential::logarithmic(2.0).eval(0.3, 1), 1e-15);
}

TEST(Potentials, PairCompatibility) {
  const auto rr = make_potential_pair(Potential::regular(), Potential::regular());
  const auto ll = make_potential_pair(Potential::logarithmic(2.0), Potential::logarithmic(3.0));
  for (const auto* pair : {&rr, &ll}) {
    EXPECT_TRUE(std::isfinite(pair->compat_constant));
    EXPECT_GT(pair->compat_constant, 0.0);
    for (int k = 0; k < 1000; ++k) {
      const double r = pair->boundary.bounded_domain() ? -1.0 + (2.0 * k + 1.0) / 1000.0
                                                       : -10.0 + 20.0 * k / 999.0;
      EXPECT_LE(std::abs(pair->bulk.beta(r)),
                pair->compat_constant * (std::abs(pair->boundary.beta(r)) + 1.0) * (1 + 1e-12));
    }
  }
  // Boundary domain R is not contained in the bulk domain (-1, 1).
  EXPECT_THROW(make_potential_pair(Potential::logarithmic(2.0), Potential::regular()),
               ValidationError);
  EXPECT_NO_THROW(make_potential_pair(Potential::regular(), Potential::logarithmic(2.0)));
}

TEST(Potentials, MeanValueCondition) {
  const auto ll = make_potential_pair(Potential::logarithmic(2.0), Potential::logarithmic(2.0));
  const auto pass = check_mean_value_condition(ll, 0.0, 0.5, 1.0);
  EXPECT_TRUE(pass.pass);
  EXPECT_DOUBLE_EQ(pass.rho, 0.5);
  EXPECT_DOUBLE_EQ(pass.lower, -0.5);
  EXPECT_DOUBLE_EQ(pass.upper, 0.5);

  const auto fail = check_mean_value_condition(ll, 0.6, 0.5, 1.0);
  EXPECT_FALSE(fail.pass);
  ASSERT_TRUE(fail.violated_endpoint.has_value());
  EXPECT_DOUBLE_EQ(*fail.violated_endpoint, 1.1);

  const auto rr = make_potential_pair(Potential::regular(), Potential::regular());
  EXPECT_TRUE(check_mean_value_condition(rr, 100.0, 1e6, 1e-3).pass);
  EXPECT_THROW(check_mean_value_condition(ll, 0.0, 0.5, 0.0), InvalidArgument);
}

TEST(Potentials, SeparationRadius) {
  const auto ll = make_potential_pair(Potential::logarithmic(2.0), Potential::logarithmic(2.0));
  for (double sup : {0.0, 0.5, 0.9}) {
    const auto r0 = separation_r0(ll, 0.0, sup);
    ASSERT_TRUE(r0.has_value());
    EXPECT_NEAR(*r0, oracle::log_separation_radius(2.0, 0.0, sup), 1e-10) << sup;
  }
  const auto r5 = separation_r0(ll, 5.0, 0.2);
  ASSERT_TRUE(r5.has_value());
  EXPECT_NEAR(*r5, oracle::log_separation_radius(2.0, 5.0, 0.2), 1e-10);

  const auto near = separation_r0(ll, 0.0, 0.999);
  ASSERT_TRUE(near.has_value());
  EXPECT_GE(*near, 0.999);
  EXPECT_LT(*near, 1.0);

  EXPECT_FALSE(separation_r0(make_potential_pair(Potential::regular(), Potential::regular()),
                             0.0, 0.5)
                   .has_value());
  EXPECT_THROW(separation_r0(ll, 0.0, 1.0), InvalidArgument);
}

}  // namespace
}  // namespace cho
