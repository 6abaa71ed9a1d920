#include <gtest/gtest.h>

#include <cmath>

#include "fgig/asymptotics.hpp"

using namespace fgig;

TEST(LimitMeasure, Regimes) {
  EXPECT_EQ(limit_regime(2.0), LimitRegime::lambda_ge_1);
  EXPECT_EQ(limit_regime(1.0), LimitRegime::lambda_ge_1);
  EXPECT_EQ(limit_regime(0.999), LimitRegime::abs_lambda_lt_1);
  EXPECT_EQ(limit_regime(-0.999), LimitRegime::abs_lambda_lt_1);
  EXPECT_EQ(limit_regime(-1.0), LimitRegime::lambda_le_minus_1);
  EXPECT_EQ(limit_regime(-3.0), LimitRegime::lambda_le_minus_1);
}

TEST(LimitMeasure, FreePoissonCase) {
  const auto d = limit_measure(1.0, 2.0);
  EXPECT_EQ(d.regime, LimitRegime::lambda_ge_1);
  EXPECT_LE(kolmogorov_distance(d.limit, build_free_poisson({1.0, 2.0})), 1e-14);
}

TEST(LimitMeasure, MixtureCase) {
  const auto d = limit_measure(1.0, 0.0);
  EXPECT_EQ(d.regime, LimitRegime::abs_lambda_lt_1);
  ASSERT_EQ(d.limit.atoms().size(), 1u);
  EXPECT_EQ(d.limit.atoms()[0].location, 0.0);
  EXPECT_NEAR(d.limit.atoms()[0].weight, 0.5, 1e-15);
  EXPECT_NEAR(d.limit.mass(), 1.0, 1e-10);
  // continuous part is half of nu(1/2, 1), supported on [0, 2]
  EXPECT_NEAR(d.limit.support().hi, 2.0, 1e-14);
  EXPECT_NEAR(moment(d.limit, 1), 0.5 * 0.5, 1e-10);
}

TEST(LimitMeasure, DiracCase) {
  const auto d = limit_measure(1.0, -3.0);
  EXPECT_EQ(d.regime, LimitRegime::lambda_le_minus_1);
  EXPECT_EQ(kolmogorov_distance(d.limit, dirac(0.0)), 0.0);
  EXPECT_THROW(limit_measure(0.0, 1.0), DomainError);
}

TEST(ConvergenceCurve, FreePoissonRegime) {
  const auto curve = convergence_curve(1.0, 2.0, beta_ladder(1e-1, 1e-4, 1));
  ASSERT_EQ(curve.size(), 4u);
  EXPECT_LE(curve.back().distance, 0.05);
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LT(curve[i].distance, curve[i - 1].distance) << i;
}

TEST(ConvergenceCurve, AllRegimesAtSmallBeta) {
  for (double lambda : {2.0, 1.0, 0.0, -0.5, -1.0, -3.0}) {
    const auto curve = convergence_curve(1.0, lambda, beta_ladder(1e-1, 1e-4, 1));
    EXPECT_LE(curve.back().distance, 0.05) << lambda;
    // monotone tail
    EXPECT_LT(curve.back().distance, curve[curve.size() - 2].distance) << lambda;
  }
}

TEST(ConvergenceCurve, SupportShrinksToZero) {
  const auto curve = convergence_curve(1.0, -3.0, {1e-4});
  ASSERT_EQ(curve.size(), 1u);
  EXPECT_LE(curve[0].b, 0.05);
}

TEST(ConvergenceCurve, RejectsBadBetas) {
  EXPECT_THROW(convergence_curve(1.0, 2.0, {1e-2, 1e-1}), DomainError);
  EXPECT_THROW(convergence_curve(1.0, 2.0, {0.0}), DomainError);
}

TEST(ScalingExponents, Table) {
  const auto betas = beta_ladder(1e-2, 1e-9, 1);
  for (double lambda : {3.0, 0.0, 0.5, -3.0, 1.0, -1.0}) {
    const auto f = scaling_exponents(1.0, lambda, betas);
    EXPECT_TRUE(f.match) << lambda << ": " << f.p_a << " " << f.p_b << " expected " << f.expected_a << " "
                         << f.expected_b;
  }
}

TEST(ScalingExponents, Specific) {
  const auto betas = beta_ladder(1e-2, 1e-9, 1);
  const auto f0 = scaling_exponents(1.0, 0.0, betas);
  EXPECT_NEAR(f0.p_a, 1.0, 0.05);
  EXPECT_NEAR(f0.p_b, 0.0, 0.05);
  EXPECT_NEAR(scaling_exponents(1.0, 1.0, betas).p_a, 2.0 / 3.0, 0.05);
  EXPECT_NEAR(scaling_exponents(1.0, -1.0, betas).p_b, 1.0 / 3.0, 0.05);
  EXPECT_THROW(scaling_exponents(1.0, 0.0, {1e-1, 1e-2, 1e-3}), DomainError);
}

TEST(RootLimits, FiniteLimits) {
  for (double lambda : {2.0, -2.0, 3.5}) {
    const auto r = root_limits(1.0, lambda);
    EXPECT_FALSE(r.delta_unbounded);
    EXPECT_TRUE(r.eta_unbounded);
    EXPECT_NEAR(r.delta_limit, 1.0 / (1.0 - std::abs(lambda)), 1e-15);
    EXPECT_LE(r.delta_rel_error, 0.01) << lambda;
  }
  for (double lambda : {0.5, -0.5, 0.0}) {
    const auto r = root_limits(1.0, lambda);
    EXPECT_TRUE(r.delta_unbounded);
    EXPECT_EQ(r.delta_sign, -1);
    EXPECT_NEAR(r.eta_limit, 1.0 / (1.0 - lambda * lambda), 1e-15);
    EXPECT_LE(r.eta_rel_error, 0.01) << lambda;
  }
}

TEST(RootLimits, BoundaryUnbounded) {
  for (double lambda : {1.0, -1.0}) {
    const auto r = root_limits(1.0, lambda);
    EXPECT_TRUE(r.delta_unbounded);
    EXPECT_TRUE(r.eta_unbounded);
    EXPECT_LT(r.delta_probe, -10.0);
    EXPECT_GT(r.eta_probe, 10.0);
  }
}

TEST(FLimit, ApproachesSquaredLinearFactor) {
  // grid kept away from the zero -alpha/(lambda - 1) of the limit
  const std::vector<double> zs = linspace(0.1, 3.0, 15);
  for (double lambda : {1.0, 2.0, 3.5}) EXPECT_LE(f_limit_deviation(1.0, lambda, 1e-8, zs), 1e-3) << lambda;
}
