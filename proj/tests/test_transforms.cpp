#include <gtest/gtest.h>

#include <cmath>

#include "fgig/measures.hpp"
#include "fgig/transforms.hpp"
#include "support.hpp"

using namespace fgig;
using fgig::testing::random_natural;

namespace {

std::vector<cplx> upper_grid(double x_lo, double x_hi) {
  std::vector<cplx> zs;
  for (double x : linspace(x_lo, x_hi, 9))
    for (double y : {0.5, 1.0, 3.0}) zs.emplace_back(x, y);
  return zs;
}

}  // namespace

TEST(RFgig, WorkedValueAtOrigin) {
  const FgigR r(NaturalParams{2.0, 8.0, 0.0});
  EXPECT_NEAR(r(0.0).real(), 2.125, 1e-12);
  EXPECT_EQ(r(0.0).imag(), 0.0);
  // guard region and closed form agree just outside the guard
  EXPECT_NEAR(r(cplx(3e-5, -1e-5)).real(), r.closed_form(cplx(3e-5, -1e-5)).real(), 1e-9);
}

TEST(RFgig, LambdaZeroFormAtAlpha) {
  const NaturalParams p{2.0, 8.0, 0.0};
  const FgigR r(p);
  const double delta = r.law().roots.delta;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const cplx z(2.0 + eps, -eps);
    const cplx expect = -0.5 / z + std::sqrt(8.0) * (z - delta) / (z * std::sqrt(cplx(2.0) - z));
    EXPECT_LE(std::abs(r(z) - expect), 1e-12 * std::abs(expect));
  }
  EXPECT_THROW(r(2.0), SingularPointError);
}

TEST(RFgig, PoleAtAlphaForPositiveLambda) {
  const FgigR r(NaturalParams{1.0, 2.0, 1.5});
  try {
    r(1.0);
    FAIL() << "expected a pole error";
  } catch (const SingularPointError& e) {
    EXPECT_NEAR(e.residue().real(), -1.5, 1e-15);
  }
}

TEST(RFgig, RemovableAtAlphaForNegativeLambda) {
  const FgigR r(NaturalParams{1.0, 2.0, -1.5});
  const cplx at = r(1.0);
  EXPECT_TRUE(std::isfinite(at.real()));
  for (double eps : {1e-3, 1e-4})
    EXPECT_NEAR(std::abs(r(cplx(1.0 + eps, -eps)) - at), 0.0, 10.0 * eps * std::max(1.0, std::abs(at)));
}

TEST(RFgig, ImaginaryPartNonPositive) {
  for (int i = 0; i < 20; ++i) {
    const FgigR r(random_natural());
    for (double x = -5.0; x <= 5.0; x += 0.25)
      for (double y : {1e-6, 1e-3, 0.1, 1.0, 4.0}) {
        const cplx z(x, -y);
        EXPECT_LE(r(z).imag(), 1e-9) << z;
      }
  }
}

TEST(RFgig, SchwarzReflection) {
  const FgigR r(NaturalParams{1.5, 0.7, 2.3});
  const double eta = r.law().roots.eta;
  for (double x : {-3.0, -0.5, 0.7, 1.2, 0.5 * (1.5 + eta)}) {
    const cplx v = r(x);
    EXPECT_LE(std::abs(v.imag()), 1e-14 * std::max(1.0, std::abs(v))) << x;
  }
}

TEST(RFgig, BoundarySigns) {
  for (int i = 0; i < 10; ++i) {
    const auto p = random_natural();
    const FgigR r(p);
    const double al = p.alpha, eta = r.law().roots.eta;
    for (double x : linspace(-4.0 * eta, al, 41)) {
      if (x == al) continue;
      EXPECT_EQ(r(cplx(x, -0.0)).imag(), 0.0) << x;
    }
    for (double x : linspace(al, eta, 41)) {
      if (x == al) continue;
      EXPECT_EQ(r(cplx(x, -0.0)).imag(), 0.0) << x;
    }
    for (double x : linspace(eta * 1.001, 4.0 * eta, 20)) EXPECT_LT(r(cplx(x, -0.0)).imag(), 0.0) << x;
  }
}

TEST(RFgig, BranchContinuityAlongAxis) {
  const FgigLaw law(NaturalParams{1.0, 2.0, 0.5});
  const BranchedSqrt s{law.beta(), law.roots.eta};
  EXPECT_NEAR(s(0.0).real(), std::sqrt(law.beta() * law.roots.eta), 1e-15);
  cplx prev = s(cplx(-5.0, -1e-9));
  const double step = 1e-3;
  for (double x = -5.0 + step; x < 10.0; x += step) {
    const cplx v = s(cplx(x, -1e-9));
    const double bound = step * std::sqrt(law.beta()) / std::sqrt(std::max(std::abs(law.roots.eta - x), step)) + 1e-4;
    EXPECT_LE(std::abs(v - prev), bound) << x;
    prev = v;
  }
}

TEST(RFreePoisson, Values) {
  const FreePoissonParams fp{1.0, 1.0};
  EXPECT_EQ(r_free_poisson(fp, 0.0), cplx(1.0));
  EXPECT_EQ(r_free_poisson(fp, -1.0), cplx(0.5));
  EXPECT_EQ(r_free_poisson({0.5, 3.0}, 0.0), cplx(1.5));
  const cplx z(0.3, -0.7);
  EXPECT_LE(std::abs(std::conj(r_free_poisson(fp, std::conj(z))) - r_free_poisson(fp, z)), 1e-16);
  EXPECT_THROW(r_free_poisson({2.0, 1.0}, 0.5), SingularPointError);
}

TEST(Cauchy, DiracAndLargeZ) {
  const auto d = dirac(1.5);
  const cplx z(0.2, 0.9);
  EXPECT_LE(std::abs(cauchy(d, z) - 1.0 / (z - 1.5)), 1e-16);
  const auto m = build_fgig(NaturalParams{2.0, 8.0, 0.0});
  const cplx far(0.0, 1e6);
  EXPECT_NEAR((cauchy(m, far) * far).real(), 1.0, 1e-5);
}

TEST(Cauchy, HerglotzAndErrors) {
  const auto m = build_fgig(NaturalParams{2.0, 8.0, 0.0});
  for (const cplx& z : upper_grid(-2.0, 6.0)) EXPECT_LT(cauchy(m, z).imag(), 0.0);
  EXPECT_THROW(cauchy(m, 2.0), DomainError);
  EXPECT_THROW(cauchy(dirac(1.0), 1.0), DomainError);
  EXPECT_NO_THROW(cauchy(m, 5.0));
}

TEST(Cauchy, ClosedFormMatchesQuadrature) {
  for (int i = 0; i < 10; ++i) {
    const FgigLaw law(random_natural());
    const auto m = build_fgig(law, 4096);
    for (const cplx& z : upper_grid(law.a() - 1.0, law.b() + 1.0)) {
      const cplx q = m.continuous()->cauchy_quadrature(z);
      EXPECT_LE(std::abs(fgig_cauchy(law, z) - q), 1e-10 * std::max(1.0, std::abs(q))) << z;
    }
  }
}

TEST(CauchyFromR, MatchesDirectCauchy) {
  for (int i = 0; i < 10; ++i) {
    const auto p = random_natural();
    const FgigR r(p);
    const auto m = build_fgig(p);
    const ComplexFn rf = [&](cplx w) { return r(w); };
    for (const cplx& z : upper_grid(m.support().lo - 1.0, m.support().hi + 1.0)) {
      const cplx g = cauchy(m, z);
      EXPECT_LE(std::abs(cauchy_from_r(rf, z) - g), 1e-8) << z << " " << p.alpha << " " << p.beta << " " << p.lambda;
    }
  }
}

TEST(CauchyFromR, FreePoisson) {
  for (const FreePoissonParams fp : {FreePoissonParams{1.0, 1.0}, FreePoissonParams{0.5, 0.3}, FreePoissonParams{2.0, 2.5}}) {
    const auto m = build_free_poisson(fp);
    const ComplexFn rf = [&](cplx w) { return r_free_poisson(fp, w); };
    for (const cplx& z : upper_grid(-1.0, m.support().hi + 1.0))
      EXPECT_LE(std::abs(cauchy_from_r(rf, z) - cauchy(m, z)), 1e-8) << z;
  }
}

TEST(CauchyFromR, ZeroRGivesInverse) {
  const ComplexFn zero = [](cplx) { return cplx(0.0); };
  const cplx z(0.4, 1.3);
  EXPECT_LE(std::abs(cauchy_from_r(zero, z) - 1.0 / z), 1e-13);
  EXPECT_THROW(cauchy_from_r(zero, cplx(1.0, -1.0)), DomainError);
}

TEST(Stieltjes, FgigDensity) {
  const FgigLaw law(NaturalParams{2.0, 8.0, 0.0});
  const ComplexFn G = [&](cplx z) { return fgig_cauchy(law, z); };
  EXPECT_NEAR(stieltjes_density(G, 2.0), std::sqrt(2.0) / pi, 1e-4);
  for (double x : {0.2, 0.8, 4.3, 6.0}) EXPECT_LE(stieltjes_density(G, x), 1e-6) << x;
}

TEST(Stieltjes, FreePoissonCenter) {
  const FreePoissonParams fp{1.0, 2.0};
  const ComplexFn G = [&](cplx z) { return free_poisson_cauchy(fp, z); };
  const double c = fp.jump * (1.0 + fp.rate);
  const double exact = std::sqrt(4.0 * fp.rate * fp.jump * fp.jump - (c - fp.jump * (1.0 + fp.rate)) * (c - fp.jump * (1.0 + fp.rate))) /
                       (2.0 * pi * fp.jump * c);
  EXPECT_NEAR(stieltjes_density(G, c), exact, 1e-6);
}

TEST(FreeCumulants, FgigFirstIsMean) {
  const auto k = free_cumulants(NaturalParams{2.0, 8.0, 0.0}, 6);
  ASSERT_EQ(k.size(), 6u);
  EXPECT_NEAR(k[0], 2.125, 1e-13);
  EXPECT_THROW(free_cumulants(NaturalParams{2.0, 8.0, 0.0}, 65), DomainError);
}

TEST(FreeCumulants, SecondIsVariance) {
  for (int i = 0; i < 10; ++i) {
    const auto p = random_natural();
    const auto m = build_fgig(p);
    const auto k = free_cumulants(p, 3);
    const double mean = moment(m, 1);
    const double var = moment(m, 2) - mean * mean;
    EXPECT_LE(relative_difference(k[1], var), 1e-9);
    const double m3 = moment(m, 3) - 3.0 * mean * moment(m, 2) + 2.0 * mean * mean * mean;
    EXPECT_NEAR(k[2], m3, 1e-9 * std::max(1.0, std::abs(m3)));
  }
}

TEST(FreeCumulants, FreePoissonGeometric) {
  const auto k = free_cumulants(FreePoissonParams{0.5, 3.0}, 5);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(k[i], 3.0 * std::pow(0.5, static_cast<double>(i + 1)));
}

TEST(FreeCumulants, Additivity) {
  for (int i = 0; i < 10; ++i) {
    const auto p = random_natural(0.05, 5.0);
    const auto lhs = free_cumulants(NaturalParams{p.alpha, p.beta, -p.lambda}, 10);
    const auto pois = free_cumulants(FreePoissonParams{1.0 / p.alpha, p.lambda}, 10);
    const auto rhs = free_cumulants(p, 10);
    for (std::size_t k = 0; k < 10; ++k)
      EXPECT_NEAR(lhs[k] + pois[k], rhs[k], 1e-9 * std::max(1.0, std::abs(rhs[k]))) << k;
  }
}

TEST(RAdditivity, LowerHalfPlaneGrid) {
  for (int i = 0; i < 10; ++i) {
    const auto p = random_natural(0.05, 5.0);
    const FgigR minus(NaturalParams{p.alpha, p.beta, -p.lambda}), plus(p);
    const FreePoissonParams fp{1.0 / p.alpha, p.lambda};
    for (double x : linspace(-3.0, 3.0, 10))
      for (double y : linspace(0.1, 3.0, 10)) {
        const cplx z(x, -y);
        EXPECT_LE(std::abs(minus(z) + r_free_poisson(fp, z) - plus(z)), 1e-10 * std::max(1.0, std::abs(plus(z)))) << z;
      }
  }
}

TEST(FidCertificate, WorkedExamplesPass) {
  for (const NaturalParams p : {NaturalParams{2.0, 8.0, 0.0}, NaturalParams{1.0, 1.0, 5.0}}) {
    const auto c = fid_certificate(FgigLaw(p));
    EXPECT_TRUE(c.pass) << c.max_imag;
    EXPECT_LE(c.max_imag, 1e-9);
    EXPECT_GT(c.samples, 40000u);
  }
}

TEST(FidCertificate, NegativeLambda) {
  const auto c = fid_certificate(FgigLaw(NaturalParams{0.7, 2.0, -3.0}));
  EXPECT_TRUE(c.pass) << c.max_imag;
}
