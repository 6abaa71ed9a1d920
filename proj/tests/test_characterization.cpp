#include <gtest/gtest.h>

#include <cmath>

#include "fgig/characterization.hpp"
#include "support.hpp"

using namespace fgig;
using fgig::testing::uniform;

TEST(SolveC, WorkedFixture) {
  const double c = solve_c(1.0, 1.0);
  EXPECT_GT(c, -0.72);
  EXPECT_LT(c, -0.715);
  EXPECT_LE(std::abs(c * c * c * c - 2.0 * c * c * c - 1.0), 1e-12);
}

TEST(SolveC, RandomInUnitInterval) {
  for (int i = 0; i < 100; ++i) {
    const double a = uniform(0.05, 10.0), l = uniform(0.05, 10.0);
    const double c = solve_c(a, l);
    EXPECT_GT(c, -1.0);
    EXPECT_LT(c, 0.0);
    EXPECT_LE(std::abs(c_polynomial(a, l, c)), 1e-12);
  }
  EXPECT_THROW(solve_c(1.0, 0.0), DomainError);
  EXPECT_THROW(solve_c(-1.0, 1.0), DomainError);
}

TEST(InitialCoefficients, WorkedFixture) {
  const double c = solve_c(1.0, 1.0);
  const auto ic = initial_coefficients(1.0, 1.0, c);
  EXPECT_NEAR(ic.alpha0, c / (1.0 + c * c), 1e-15);
  EXPECT_NEAR(ic.alpha0, -0.4734, 1e-4);
}

TEST(InitialCoefficients, BoundsRandom) {
  for (int i = 0; i < 50; ++i) {
    const double a = uniform(0.1, 5.0), l = uniform(0.1, 5.0);
    const double c = solve_c(a, l);
    const auto ic = initial_coefficients(a, l, c);
    const double q = 1.0 + c * c;
    EXPECT_GE(ic.alpha1, 1.0 / (q * q) - 1e-12);
    EXPECT_LE(ic.alpha1, 1.0 / q + 1e-12);
    EXPECT_GE(ic.beta1_from_alpha1, -1.0 - 1e-12);
    EXPECT_LE(ic.beta1_from_alpha1, -c * c + 1e-12);
    EXPECT_NEAR(ic.beta1_from_alpha1, ic.beta1_from_derivative, 1e-10 * std::max(1.0, std::abs(ic.beta1_from_alpha1)));
  }
}

TEST(InitialCoefficients, LowOrderResidualsVanish) {
  for (auto [a, l] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.7, 2.5}}) {
    const double c = solve_c(a, l);
    const auto ic = initial_coefficients(a, l, c);
    const auto e = detail::fe2_residual(a, l, c, {ic.alpha0, ic.alpha1}, 1);
    EXPECT_LE(std::abs(e[0]), 1e-12);
    EXPECT_LE(std::abs(e[1]), 1e-12);
  }
}

TEST(SeriesCoefficients, ResidualsAndLinearCoefficient) {
  const auto rep = series_coefficients(1.0, 1.0, 12);
  ASSERT_EQ(rep.m.coeffs.size(), 13u);
  for (double r : rep.residuals) EXPECT_LE(r, 1e-12);
  for (double lc : rep.linear_coefficients) EXPECT_GE(lc, rep.linear_bound - 1e-9);
  for (double col : rep.collinearity) EXPECT_LE(col, 1e-9);
  EXPECT_EQ(rep.n.coeffs[0], rep.m.center);
  EXPECT_THROW(series_coefficients(1.0, 1.0, 33), DomainError);
}

TEST(SeriesCoefficients, MatchOracleThroughOrderEight) {
  const double c = solve_c(1.0, 1.0);
  const auto s = series_coefficients(1.0, 1.0, 8).m;
  const auto o = oracle_coefficients(1.0, 1.0, c, 8);
  for (std::size_t k = 0; k <= 8; ++k) EXPECT_LE(relative_difference(s.coeffs[k], o.coeffs[k]), 1e-6) << k;
}

TEST(SeriesCoefficients, MatchOracleRandom) {
  for (int i = 0; i < 5; ++i) {
    const double a = uniform(0.5, 3.0), l = uniform(0.5, 3.0);
    const double c = solve_c(a, l);
    const auto rep = series_coefficients(a, l, 8);
    const auto o = oracle_coefficients(a, l, c, 8);
    for (std::size_t k = 0; k <= 8; ++k)
      EXPECT_LE(relative_difference(rep.m.coeffs[k], o.coeffs[k]), 1e-6) << k << " " << a << " " << l;
    for (double lc : rep.linear_coefficients) EXPECT_GE(lc, rep.linear_bound - 1e-9);
  }
}

TEST(Oracle, LeadingCoefficients) {
  for (auto [a, l] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}, std::pair{0.6, 2.2}}) {
    const double c = solve_c(a, l);
    const auto o = oracle_coefficients(a, l, c, 2);
    const auto x = build_fgig(NaturalParams{a, a, -l});
    EXPECT_NEAR(o.coeffs[0], cauchy(x, 1.0 / c).real(), 1e-13);
    EXPECT_NEAR(o.coeffs[0], c / (1.0 + c * c), 1e-9);
    const double q = 1.0 + c * c;
    EXPECT_GE(o.coeffs[1], 1.0 / (q * q));
    EXPECT_LE(o.coeffs[1], 1.0 / q);
  }
}

TEST(FixedPoint, TwoOne) {
  const auto r = verify_fixed_point(2.0, 1.0);
  EXPECT_LE(r.quartic_residual, 1e-12);
  EXPECT_GT(r.c, -1.0);
  EXPECT_LT(r.c, 0.0);
  EXPECT_LE(r.max_rel_dev, 1e-6);
  EXPECT_LE(r.key_equation_residual, 1e-9);
  EXPECT_LE(r.cauchy_inversion_residual, 1e-9);
  EXPECT_LE(r.sum_distance, 1e-3);
  EXPECT_LE(r.fixed_point_distance, 1e-3);
}

TEST(FixedPoint, Iterated) {
  const auto r = verify_iterated(2.0, 8.0, 1.0);
  ASSERT_EQ(r.stages.size(), 4u);
  for (const auto& s : r.stages) EXPECT_LE(s.distance, 2e-3) << s.description;
  EXPECT_LE(r.final_distance, 2e-3);
  EXPECT_THROW(verify_iterated(2.0, 8.0, -1.0), DomainError);
}
