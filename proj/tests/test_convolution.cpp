#include <gtest/gtest.h>

#include <cmath>

#include "fgig/convolution.hpp"
#include "support.hpp"

using namespace fgig;

namespace {

std::vector<cplx> upper_points() {
  std::vector<cplx> zs;
  for (double x : linspace(-1.0, 8.0, 7))
    for (double y : {0.01, 0.3, 2.0}) zs.emplace_back(x, y);
  return zs;
}

struct PoissonFixture {
  NaturalParams target;
  SpectralMeasure x, y, sum;
};

PoissonFixture poisson_fixture(double alpha, double beta, double lambda) {
  const NaturalParams p{alpha, beta, lambda};
  return {p, build_fgig(NaturalParams{alpha, beta, -lambda}), build_free_poisson({1.0 / alpha, lambda}), build_fgig(p)};
}

}  // namespace

TEST(Subordination, DiracZeroIsIdentity) {
  const auto mu = build_fgig(NaturalParams{2.0, 8.0, 0.0});
  const auto d0 = dirac(0.0);
  for (const cplx& z : upper_points()) {
    const auto sp = subordination_at(mu, d0, z);
    EXPECT_LE(std::abs(sp.omega1 - z), 1e-10 * std::max(1.0, std::abs(z))) << z;
    EXPECT_LE(std::abs(sp.cauchy - cauchy(mu, z)), 1e-10) << z;
  }
}

TEST(Subordination, SwapSymmetry) {
  const auto mu = build_fgig(NaturalParams{1.0, 3.0, 0.5});
  const auto nu = build_free_poisson({0.7, 1.5});
  for (const cplx& z : upper_points()) {
    const auto a = subordination_at(mu, nu, z), b = subordination_at(nu, mu, z);
    EXPECT_LE(std::abs(a.omega1 - b.omega2), 1e-9 * std::max(1.0, std::abs(a.omega1))) << z;
    EXPECT_LE(std::abs(a.omega2 - b.omega1), 1e-9 * std::max(1.0, std::abs(a.omega2))) << z;
  }
}

TEST(Subordination, PoissonSumMatchesFgigCauchy) {
  const auto f = poisson_fixture(2.0, 8.0, 1.0);
  for (const cplx& z : upper_points()) {
    const auto sp = subordination_at(f.x, f.y, z);
    EXPECT_LE(std::abs(sp.cauchy - cauchy(f.sum, z)), 1e-7) << z;
  }
}

TEST(Subordination, IdentityAndHerglotz) {
  const auto f = poisson_fixture(1.0, 1.0, 2.0);
  for (const cplx& z : upper_points()) {
    const auto sp = subordination_at(f.x, f.y, z);
    EXPECT_LE(std::abs(sp.omega1 + sp.omega2 - 1.0 / sp.cauchy - z), 1e-10 * std::max(1.0, std::abs(z))) << z;
    EXPECT_GE(sp.omega1.imag(), z.imag() * (1.0 - 1e-12));
    EXPECT_GE(sp.omega2.imag(), z.imag() * (1.0 - 1e-12));
  }
  EXPECT_THROW(subordination_at(f.x, f.y, cplx(1.0, 0.0)), DomainError);
}

TEST(FreeConvolve, DiracTranslation) {
  const auto mu = build_fgig(NaturalParams{2.0, 8.0, 0.0});
  const auto res = free_convolve(mu, dirac(1.0));
  EXPECT_TRUE(res.exact_translation);
  EXPECT_LE(kolmogorov_distance(res.measure, translate(mu, 1.0)), 1e-8);
  const auto swapped = free_convolve(dirac(1.0), mu);
  EXPECT_LE(kolmogorov_distance(swapped.measure, translate(mu, 1.0)), 1e-8);
}

TEST(FreeConvolve, PoissonSumReachesFgig) {
  const auto f = poisson_fixture(2.0, 8.0, 1.0);
  const auto res = free_convolve(f.x, f.y);
  EXPECT_LE(kolmogorov_distance(res.measure, f.sum), 1e-4);
  EXPECT_NEAR(res.measure.mass(), 1.0, 1e-6);
  EXPECT_LE(res.max_identity_residual, 1e-10);
  EXPECT_GE(res.min_imag_excess, 0.0);
  EXPECT_NEAR(moment(res.measure, 1), moment(f.x, 1) + moment(f.y, 1), 1e-6);
}

TEST(FreeConvolve, SemicircleStability) {
  const auto s1 = build_semicircle(0.0, 1.0), s2 = build_semicircle(0.5, 1.0);
  const auto res = free_convolve(s1, s2);
  EXPECT_LE(kolmogorov_distance(res.measure, build_semicircle(0.5, 2.0)), 1e-5);
  EXPECT_NEAR(res.measure.mass(), 1.0, 1e-6);
  EXPECT_NEAR(moment(res.measure, 1), 0.5, 1e-6);
}

TEST(FreeConvolve, ThreadCountDoesNotChangeResult) {
  const auto s1 = build_semicircle(0.0, 1.0), s2 = build_free_poisson({1.0, 2.0});
  ConvolveOptions o1, o2;
  o1.points = o2.points = 201;
  o2.threads = 3;
  const auto a = free_convolve(s1, s2, o1), b = free_convolve(s1, s2, o2);
  EXPECT_EQ(a.density, b.density);
}

TEST(RAdditivity, ProbeResidual) {
  EXPECT_LE(r_additivity_residual({2.0, 8.0, 1.0}, lower_half_plane_probes(2.0)), 1e-10);
  EXPECT_LE(r_additivity_residual({1.0, 1.0, 2.0}, lower_half_plane_probes(2.0)), 1e-10);
  EXPECT_THROW(r_additivity_residual({1.0, 1.0, -2.0}, lower_half_plane_probes(1.0)), DomainError);
}
