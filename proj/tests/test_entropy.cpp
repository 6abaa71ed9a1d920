#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fgig/entropy.hpp"
#include "support.hpp"

using namespace fgig;
using fgig::testing::uniform;

namespace {

double k_half(double w) { return std::sqrt(pi / (2.0 * w)) * std::exp(-w); }
double k_three_halves(double w) { return k_half(w) * (1.0 + 1.0 / w); }

DensityFn gig(double a, double b, double l) {
  return [=](double x) { return classical_gig_density(a, b, l, x); };
}

DensityFn gig_log(double a, double b, double l) {
  return [=](double x) { return classical_gig_log_density(a, b, l, x); };
}

}  // namespace

TEST(Potential, ValueAndMinimizer) {
  const Potential V{2.0, 8.0, 1.0};
  EXPECT_NEAR(V(2.0), 4.0 + 4.0, 1e-15);
  const double m = V.minimizer();
  EXPECT_NEAR(m, 2.0, 1e-14);
  for (double l : {-3.0, 0.0, 0.5, 4.0}) {
    const Potential W{1.3, 0.4, l};
    const double x = W.minimizer();
    const double dv = (1.0 - l) / x + W.alpha - W.beta / (x * x);
    EXPECT_NEAR(dv, 0.0, 1e-12 * std::max(1.0, W.beta / (x * x)));
  }
}

TEST(BesselK, HalfIntegerClosedForms) {
  for (double w : linspace(0.1, 20.0, 60)) {
    EXPECT_LE(std::abs(bessel_k(0.5, w) / k_half(w) - 1.0), 1e-10) << w;
    EXPECT_LE(std::abs(bessel_k(1.5, w) / k_three_halves(w) - 1.0), 1e-10) << w;
    EXPECT_LE(std::abs(bessel_k(-0.5, w) / k_half(w) - 1.0), 1e-10) << w;
  }
  EXPECT_THROW(bessel_k(0.5, 0.0), DomainError);
}

TEST(BesselK, RecurrenceAndLargeArgument) {
  // K_{nu+1} = K_{nu-1} + (2 nu / w) K_nu
  for (double nu : {0.3, 1.0, 2.7})
    for (double w : {0.2, 1.0, 7.0}) {
      const double lhs = bessel_k(nu + 1.0, w), rhs = bessel_k(nu - 1.0, w) + 2.0 * nu / w * bessel_k(nu, w);
      EXPECT_LE(std::abs(lhs / rhs - 1.0), 1e-10) << nu << " " << w;
    }
  EXPECT_LE(std::abs(log_scaled_bessel_k(0.5, 500.0) - std::log(std::sqrt(pi / 1000.0))), 1e-10);
}

TEST(ClassicalGig, Normalization) {
  for (auto [a, b, l] : {std::tuple{2.0, 8.0, 1.0}, std::tuple{1.0, 1.0, -2.5}, std::tuple{0.3, 4.0, 0.5},
                         std::tuple{5.0, 0.2, 3.0}}) {
    const auto p = gig(a, b, l);
    const double mass = integrate_half_line(p, p, Potential{a, b, l}.minimizer());
    EXPECT_NEAR(mass, 1.0, 1e-8) << a << " " << b << " " << l;
  }
  EXPECT_EQ(classical_gig_density(1.0, 1.0, 0.0, 0.0), 0.0);
  EXPECT_THROW(classical_gig_density(0.0, 1.0, 0.0, 1.0), DomainError);
}

TEST(ClassicalGig, HalfOrderNormalizerClosedForm) {
  const double a = 1.5, b = 2.0;
  const double w = 2.0 * std::sqrt(a * b);
  const double expect = std::pow(a / b, 0.25) / (2.0 * k_half(w));
  EXPECT_LE(std::abs(std::exp(gig_log_normalizer(a, b, 0.5)) / expect - 1.0), 1e-10);
  EXPECT_NEAR(gibbs_bound(a, b, 0.5), -std::log(expect), 1e-10);
}

TEST(ClassicalGig, ProportionalToExpMinusPotential) {
  const Potential V{2.0, 8.0, 1.0};
  const double ref = classical_gig_density(2.0, 8.0, 1.0, 1.0) * std::exp(V(1.0));
  for (double x : linspace(0.2, 12.0, 40)) {
    const double ratio = classical_gig_density(2.0, 8.0, 1.0, x) * std::exp(V(x));
    EXPECT_LE(std::abs(ratio / ref - 1.0), 1e-10) << x;
  }
}

TEST(ClassicalEntropy, GibbsEqualityAtGig) {
  for (auto [a, b, l] : {std::tuple{2.0, 8.0, 1.0}, std::tuple{1.0, 1.0, -2.5}, std::tuple{0.3, 4.0, 0.5}}) {
    const double h = classical_entropy(gig(a, b, l), Potential{a, b, l});
    EXPECT_LE(std::abs(h - gibbs_bound(a, b, l)), 1e-6) << a << " " << b << " " << l;
  }
  EXPECT_NEAR(gibbs_bound(2.0, 8.0, 1.0), -7.38341190077258, 1e-9);
}

TEST(ClassicalEntropy, PerturbedDensitiesFallBelow) {
  const Potential V{2.0, 8.0, 1.0};
  const double bound = gibbs_bound(2.0, 8.0, 1.0);
  // dilated GIG: x -> c x stays a GIG with alpha / c, beta c
  for (double c : {0.9, 1.1, 1.5}) {
    const auto p = gig(2.0 / c, 8.0 * c, 1.0);
    EXPECT_LT(classical_entropy(p, V), bound - 1e-6) << c;
  }
  for (auto [a, b, l] : {std::tuple{2.2, 8.0, 1.0}, std::tuple{2.0, 7.0, 1.0}, std::tuple{2.0, 8.0, 0.5}})
    EXPECT_LT(classical_entropy(gig(a, b, l), V), bound - 1e-6);
}

TEST(ClassicalEntropy, GibbsInequalityRandomPairs) {
  for (int i = 0; i < 5; ++i) {
    const double a1 = uniform(0.5, 3.0), b1 = uniform(0.5, 3.0), l1 = uniform(-2.0, 2.0);
    const double a2 = uniform(0.5, 3.0), b2 = uniform(0.5, 3.0), l2 = uniform(-2.0, 2.0);
    const auto p = gig(a1, b1, l1);
    const double center = Potential{a1, b1, l1}.minimizer();
    const double hp = cross_entropy(p, gig_log(a1, b1, l1), center);
    const double hpq = cross_entropy(p, gig_log(a2, b2, l2), center);
    EXPECT_LE(hp, hpq + 1e-10) << i;
  }
}

TEST(ClassicalEntropy, DivergentIntegralIsReported) {
  // p log q with q vanishing on the bulk of p has no finite value
  const auto p = gig(2.0, 8.0, 1.0);
  const DensityFn log_q = [](double x) { return x > 1.0 ? 0.0 : -std::numeric_limits<double>::infinity(); };
  EXPECT_THROW(cross_entropy(p, log_q, 2.0), NumericError);
}

TEST(FreeEntropy, RefinementStable) {
  const NaturalParams p{2.0, 8.0, 1.0};
  const auto m = build_fgig(p);
  const double i256 = free_entropy(m, potential(p), 256), i512 = free_entropy(m, potential(p), 512);
  EXPECT_LE(std::abs(i256 - i512), 1e-5);
  EXPECT_TRUE(std::isfinite(i512));
}

TEST(FreeEntropy, SemicircleLogEnergy) {
  // log energy of the semicircle of radius 2 is -1/4; shifting keeps it
  const auto m = build_semicircle(5.0, 1.0);
  const Potential zero{0.0, 0.0, 1.0};
  EXPECT_NEAR(free_entropy(m, zero, 512), -0.25, 1e-6);
}

TEST(FreeEntropy, Errors) {
  EXPECT_THROW(free_entropy(build_free_poisson({1.0, 1.0}), Potential{}), DomainError);
  EXPECT_THROW(free_entropy(build_free_poisson({1.0, 0.5}), Potential{}), DomainError);
  EXPECT_THROW(free_entropy(build_fgig(NaturalParams{2.0, 8.0, 1.0}), Potential{}, 4), DomainError);
}

TEST(Maximality, DefaultScanMarginsPositive) {
  const NaturalParams p{2.0, 8.0, 1.0};
  const auto r = maximality_scan(p, default_perturbations(p));
  EXPECT_TRUE(r.all_positive);
  ASSERT_EQ(r.entries.size(), 7u);
  EXPECT_EQ(r.entries[0].margin, 0.0);
  for (std::size_t i = 1; i < r.entries.size(); ++i) EXPECT_GT(r.entries[i].margin, 0.0) << r.entries[i].perturbation.label;
}

TEST(Maximality, ParameterShiftFixture) {
  const NaturalParams p{2.0, 8.0, 1.0};
  const auto V = potential(p);
  EXPECT_GT(free_entropy(build_fgig(p), V), free_entropy(build_fgig(NaturalParams{2.2, 8.0, 1.0}), V));
  EXPECT_THROW(maximality_scan(NaturalParams{-1.0, 8.0, 1.0}, {}), DomainError);
}
