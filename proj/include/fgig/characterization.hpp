#ifndef FGIG_CHARACTERIZATION_HPP
#define FGIG_CHARACTERIZATION_HPP

#include <cmath>
#include <vector>

#include "fgig/convolution.hpp"
#include "fgig/measures.hpp"
#include "fgig/numeric.hpp"
#include "fgig/params.hpp"
#include "fgig/series.hpp"
#include "fgig/transforms.hpp"

namespace fgig {

/// Taylor coefficients of a function at a real point.
struct CoefficientSeries {
  double center = 0.0;
  std::vector<double> coeffs;
};

inline double c_polynomial(double alpha, double lambda, double c) {
  return ((alpha * c - (1.0 + lambda)) * c * c + (1.0 - lambda)) * c - alpha;
}

/// The root in (-1, 0) of alpha c^4 - (1 + lambda) c^3 + (1 - lambda) c - alpha.
inline double solve_c(double alpha, double lambda) {
  if (!(alpha > 0.0) || !(lambda > 0.0)) throw DomainError("solve_c: alpha and lambda must be positive");
  auto f = [&](double c) { return c_polynomial(alpha, lambda, c); };
  double c = bisect(f, -1.0, 0.0, 1e-15);
  for (int i = 0; i < 3; ++i) {
    const double d = (4.0 * alpha * c - 3.0 * (1.0 + lambda)) * c * c + (1.0 - lambda);
    if (d == 0.0) break;
    const double next = c - f(c) / d;
    if (!(next > -1.0 && next < 0.0) || std::abs(f(next)) > std::abs(f(c))) break;
    c = next;
  }
  return c;
}

struct InitialCoefficients {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double beta1_from_alpha1 = 0.0;  // (1 - c^2)/(alpha1 c^2 (1 + c^2)) - 1/c^2
  double beta1_from_derivative = 0.0;  // N'(c) written with alpha0, alpha1, lambda
};

/// beta_1 = N'(c) in terms of alpha0, alpha1 and lambda.
inline double beta1_derivative_form(double alpha, double lambda, double c, double a0, double a1) {
  const double g = a0 - (1.0 + lambda) * c + alpha * c * c;
  const double num = -lambda * c * c * a1 + c * c * (-1.0 - lambda + 2.0 * alpha * c - alpha * alpha * c * c) +
                     2.0 * c * (1.0 + lambda - alpha * c) * a0 - a0 * a0;
  return num / (c * c * g * g);
}

inline InitialCoefficients initial_coefficients(double alpha, double lambda, double c) {
  InitialCoefficients ic;
  const double q = 1.0 + c * c;
  ic.alpha0 = c / q;
  // c q^2 a1^2 + (alpha q^2 - 2c) q a1 - (alpha - c + alpha c^2) = 0; the smaller root
  const double A = c * q * q, B = (alpha * q * q - 2.0 * c) * q, C = -(alpha - c + alpha * c * c);
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) throw NumericError("initial_coefficients: negative discriminant", disc);
  const double sq = std::sqrt(disc);
  const double t = -0.5 * (B + std::copysign(sq, B));
  const double r1 = t / A, r2 = C / t;
  ic.alpha1 = std::min(r1, r2);
  ic.beta1_from_alpha1 = (1.0 - c * c) / (ic.alpha1 * c * c * q) - 1.0 / (c * c);
  ic.beta1_from_derivative = beta1_derivative_form(alpha, lambda, c, ic.alpha0, ic.alpha1);
  return ic;
}

namespace detail {

// E(t) = -M + z - z^2 M(N(z)) around z = c + t, truncated at `order`.
inline TruncatedSeries<double> fe2_residual(double alpha, double lambda, double c, const std::vector<double>& a,
                                            std::size_t order, TruncatedSeries<double>* n_out = nullptr) {
  using S = TruncatedSeries<double>;
  S m(order);
  for (std::size_t k = 0; k <= order && k < a.size(); ++k) m[k] = a[k];
  const S z = S::variable(order) + c;
  const S num = -z + alpha * (z * z) + m;
  const S den = (-(1.0 + lambda)) * (z * z) + alpha * (z * z * z) + z * m;
  S n = num / den;
  if (n_out) *n_out = n;
  S shifted = n;
  shifted[0] = 0.0;  // N(c) = c
  const S mn = compose(m, shifted);
  return -m + z - (z * z) * mn;
}

}  // namespace detail

struct SeriesSolveReport {
  CoefficientSeries m;  // alpha_0 .. alpha_N
  CoefficientSeries n;  // beta_0 .. beta_N
  std::vector<double> residuals;  // |[t^k] E| after solving, k = 0..N
  std::vector<double> linear_coefficients;  // 1 + c^2 beta1^n + c^2 p alpha1, n >= 2
  std::vector<double> collinearity;  // deviation of the third evaluation, n >= 2
  double linear_bound = 0.0;  // alpha (1 - c^4)/(alpha - c + alpha c^2)
  double p = 0.0;
};

/// Coefficients of M at c solved order by order from -M(z) + z = z^2 M(N(z)).
inline SeriesSolveReport series_coefficients(double alpha, double lambda, std::size_t order) {
  if (order > 32) throw DomainError("series_coefficients: order must be <= 32");
  const double c = solve_c(alpha, lambda);
  const auto ic = initial_coefficients(alpha, lambda, c);
  SeriesSolveReport rep;
  rep.m.center = rep.n.center = c;
  rep.p = (1.0 - c * c * c * c) / (c * (alpha - c + alpha * c * c));
  rep.linear_bound = alpha * (1.0 - c * c * c * c) / (alpha - c + alpha * c * c);
  std::vector<double> a{ic.alpha0, ic.alpha1};
  a.resize(order + 1, 0.0);
  a.resize(std::max<std::size_t>(order + 1, 2));
  for (std::size_t n = 2; n <= order; ++n) {
    auto coeff_at = [&](double v) {
      a[n] = v;
      return detail::fe2_residual(alpha, lambda, c, a, n)[n];
    };
    const double e0 = coeff_at(0.0), e1 = coeff_at(1.0), e2 = coeff_at(2.0);
    const double slope = e1 - e0;
    rep.collinearity.push_back(std::abs(e2 - 2.0 * e1 + e0) / std::max({1.0, std::abs(e0), std::abs(e1)}));
    if (slope == 0.0) throw NumericError("series_coefficients: vanishing linear coefficient", 0.0);
    rep.linear_coefficients.push_back(-slope);
    a[n] = -e0 / slope;
  }
  a.resize(order + 1);
  TruncatedSeries<double> nser;
  const auto e = detail::fe2_residual(alpha, lambda, c, a, order, &nser);
  for (std::size_t k = 0; k <= order; ++k) rep.residuals.push_back(std::abs(e[k]));
  rep.m.coeffs = a;
  rep.n.coeffs = nser.coefficients();
  return rep;
}

/// alpha_k = int x^{k-1} / (1 - c x)^{k+1} dmu for k >= 1 and int c/(1 - c x) dmu for k = 0,
/// with X ~ mu(alpha, alpha, -lambda).
inline CoefficientSeries oracle_coefficients(double alpha, double lambda, double c, std::size_t order) {
  const auto m = build_fgig(NaturalParams{alpha, alpha, -lambda});
  CoefficientSeries s{c, {}};
  s.coeffs.push_back(m.integrate([c](double x) { return c / (1.0 - c * x); }));
  for (std::size_t k = 1; k <= order; ++k)
    s.coeffs.push_back(m.integrate([c, k](double x) {
      return std::pow(x, static_cast<double>(k) - 1.0) / std::pow(1.0 - c * x, static_cast<double>(k) + 1.0);
    }));
  return s;
}

struct CharacterizationReport {
  double alpha = 0.0, lambda = 0.0;
  double c = 0.0;
  double quartic_residual = 0.0;
  CoefficientSeries series;
  CoefficientSeries oracle;
  double max_rel_dev = 0.0;
  double key_equation_residual = 0.0;
  double cauchy_inversion_residual = 0.0;
  double sum_distance = 0.0;  // X + Y against mu(alpha, alpha, lambda)
  double fixed_point_distance = 0.0;  // (X + Y)^{-1} against X
};

/// X ~ mu(alpha, alpha, -lambda), Y ~ nu(1/alpha, lambda): checks X = (X + Y)^{-1} in law.
inline CharacterizationReport verify_fixed_point(double alpha, double lambda, std::size_t order = 8,
                                                 const ConvolveOptions& opt = {}) {
  CharacterizationReport r;
  r.alpha = alpha;
  r.lambda = lambda;
  r.c = solve_c(alpha, lambda);
  r.quartic_residual = std::abs(c_polynomial(alpha, lambda, r.c));
  r.series = series_coefficients(alpha, lambda, order).m;
  r.oracle = oracle_coefficients(alpha, lambda, r.c, order);
  for (std::size_t k = 0; k <= order; ++k)
    r.max_rel_dev = std::max(r.max_rel_dev, relative_difference(r.series.coeffs[k], r.oracle.coeffs[k]));

  const auto x = build_fgig(NaturalParams{alpha, alpha, -lambda});
  const auto inv = pushforward_reciprocal(x);
  const double g = cauchy(inv, r.c).real();
  r.key_equation_residual = std::abs(1.0 / r.c - lambda / (g - alpha) - r.c);
  // G_{1/X}(z) = (1/z)(1 - G_X(1/z)/z), against quadrature over the pushed-forward nodes
  for (cplx z : {cplx(r.c, 0.0), cplx(-2.0, 0.0), cplx(0.5, 1.0), cplx(3.0, 0.25), cplx(-0.5, -2.0)}) {
    const cplx lhs = cauchy_quadrature(inv, z);
    const cplx rhs = (1.0 - cauchy(x, 1.0 / z) / z) / z;
    r.cauchy_inversion_residual = std::max(r.cauchy_inversion_residual, std::abs(lhs - rhs));
  }
  const auto y = build_free_poisson({1.0 / alpha, lambda});
  const auto sum = free_convolve(x, y, opt).measure;
  r.sum_distance = kolmogorov_distance(sum, build_fgig(NaturalParams{alpha, alpha, lambda}));
  r.fixed_point_distance = kolmogorov_distance(pushforward_reciprocal(sum), x);
  return r;
}

struct IteratedStage {
  std::string description;
  double distance = 0.0;
};

struct IteratedReport {
  NaturalParams params;
  std::vector<IteratedStage> stages;
  double final_distance = 0.0;
};

/// X ~ mu(alpha, beta, -lambda), Y1 ~ nu(1/beta, lambda), Y2 ~ nu(1/alpha, lambda):
/// X = (Y1 + (Y2 + X)^{-1})^{-1} in law, checked stage by stage.
inline IteratedReport verify_iterated(double alpha, double beta, double lambda, const ConvolveOptions& opt = {}) {
  if (!(lambda > 0.0)) throw DomainError("verify_iterated: lambda must be positive");
  IteratedReport r;
  r.params = {alpha, beta, lambda};
  const auto x = build_fgig(NaturalParams{alpha, beta, -lambda});
  const auto y1 = build_free_poisson({1.0 / beta, lambda});
  const auto y2 = build_free_poisson({1.0 / alpha, lambda});
  const auto s1 = free_convolve(x, y2, opt).measure;
  r.stages.push_back({"X+Y2 ~ mu(alpha,beta,lambda)", kolmogorov_distance(s1, build_fgig(NaturalParams{alpha, beta, lambda}))});
  const auto i1 = pushforward_reciprocal(s1);
  r.stages.push_back({"(X+Y2)^-1 ~ mu(beta,alpha,-lambda)", kolmogorov_distance(i1, build_fgig(NaturalParams{beta, alpha, -lambda}))});
  const auto s2 = free_convolve(i1, y1, opt).measure;
  r.stages.push_back({"Y1+(X+Y2)^-1 ~ mu(beta,alpha,lambda)", kolmogorov_distance(s2, build_fgig(NaturalParams{beta, alpha, lambda}))});
  const auto i2 = pushforward_reciprocal(s2);
  r.final_distance = kolmogorov_distance(i2, x);
  r.stages.push_back({"(Y1+(Y2+X)^-1)^-1 ~ mu(alpha,beta,-lambda)", r.final_distance});
  return r;
}

}  // namespace fgig

#endif  // FGIG_CHARACTERIZATION_HPP
