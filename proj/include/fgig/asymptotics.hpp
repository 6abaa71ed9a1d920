#ifndef FGIG_ASYMPTOTICS_HPP
#define FGIG_ASYMPTOTICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fgig/measures.hpp"
#include "fgig/numeric.hpp"
#include "fgig/params.hpp"

namespace fgig {

enum class LimitRegime { lambda_ge_1, abs_lambda_lt_1, lambda_le_minus_1 };

inline const char* regime_name(LimitRegime r) {
  switch (r) {
    case LimitRegime::lambda_ge_1:
      return "lambda_ge_1";
    case LimitRegime::abs_lambda_lt_1:
      return "abs_lambda_lt_1";
    case LimitRegime::lambda_le_minus_1:
      return "lambda_le_minus_1";
  }
  return "";
}

inline LimitRegime limit_regime(double lambda) {
  if (lambda >= 1.0) return LimitRegime::lambda_ge_1;
  if (lambda <= -1.0) return LimitRegime::lambda_le_minus_1;
  return LimitRegime::abs_lambda_lt_1;
}

/// Weak limit of mu(alpha, beta, lambda) as beta -> 0.
struct LimitDescription {
  LimitRegime regime;
  SpectralMeasure limit;
};

inline LimitDescription limit_measure(double alpha, double lambda, std::size_t n = 256) {
  if (!(alpha > 0.0) || !std::isfinite(lambda)) throw DomainError("limit_measure: need alpha > 0, finite lambda");
  const auto regime = limit_regime(lambda);
  switch (regime) {
    case LimitRegime::lambda_ge_1:
      return {regime, build_free_poisson({1.0 / alpha, lambda}, n)};
    case LimitRegime::abs_lambda_lt_1:
      // (1 - lambda)/2 delta_0 + (1 + lambda)/2 nu((1 + lambda)/(2 alpha), 1)
      return {regime, build_free_poisson({(1.0 + lambda) / (2.0 * alpha), 1.0}, n, 0.5 * (1.0 + lambda),
                                         {Atom{0.0, 0.5 * (1.0 - lambda)}})};
    case LimitRegime::lambda_le_minus_1:
      break;
  }
  return {regime, dirac(0.0)};
}

/// Support and roots along a decreasing beta sequence.
struct PathPoint {
  double beta = 0.0;
  SupportForm support;
  SpectralRoots roots;
};

/// Solves the support for each beta, warm-starting every solve from the previous one.
inline std::vector<PathPoint> support_path(double alpha, double lambda, const std::vector<double>& betas) {
  std::vector<PathPoint> out;
  std::optional<SpreadForm> warm;
  for (double beta : betas) {
    const NaturalParams p{alpha, beta, lambda};
    SolveOptions opt;
    opt.initial = warm;
    const auto s = solve_support(p, opt);
    warm = to_spread(s);
    out.push_back({beta, s, spectral_roots(p, s)});
  }
  return out;
}

/// Geometric sequence hi, hi*r, ... down to lo.
inline std::vector<double> beta_ladder(double hi, double lo, int per_decade = 2) {
  std::vector<double> b;
  const int steps = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  for (int k = 0; k <= steps; ++k) b.push_back(hi * std::pow(10.0, -static_cast<double>(k) / per_decade));
  return b;
}

struct ConvergencePoint {
  double beta = 0.0;
  double a = 0.0, b = 0.0, delta = 0.0, eta = 0.0;
  double distance = 0.0;
};

/// Levy distance from mu(alpha, beta, lambda) to the beta -> 0 limit along `betas`.
/// The support chain starts at beta = 0.1 so that the first solve is well conditioned.
inline std::vector<ConvergencePoint> convergence_curve(double alpha, double lambda, const std::vector<double>& betas) {
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0)) throw DomainError("convergence_curve: betas must be positive");
    if (i > 0 && !(betas[i] < betas[i - 1])) throw DomainError("convergence_curve: betas must decrease");
  }
  const auto lim = limit_measure(alpha, lambda);
  std::vector<double> chain;
  if (!betas.empty() && betas.front() < 0.1) chain = beta_ladder(0.1, betas.front() * 10.0, 2);
  const std::size_t skip = chain.size();
  chain.insert(chain.end(), betas.begin(), betas.end());
  const auto path = support_path(alpha, lambda, chain);
  std::vector<ConvergencePoint> out;
  for (std::size_t i = skip; i < path.size(); ++i) {
    const auto& pp = path[i];
    SolveOptions warm;
    warm.initial = to_spread(pp.support);
    const FgigLaw law(NaturalParams{alpha, pp.beta, lambda}, warm);
    ConvergencePoint c{pp.beta, pp.support.a, pp.support.b, pp.roots.delta, pp.roots.eta};
    c.distance = levy_distance(build_fgig(law, default_node_count(pp.support.a, pp.support.b)), lim.limit);
    out.push_back(c);
  }
  return out;
}

struct ScalingFit {
  double slope_a = 0.0, slope_b = 0.0;  // least-squares slopes of log a, log b against log beta
  double p_a = 0.0, p_b = 0.0;  // reported exponents (0 for a constant limit)
  double expected_a = 0.0, expected_b = 0.0;
  bool match = false;
};

/// Expected (p_a, p_b) for each lambda class.
inline std::array<double, 2> expected_exponents(double lambda) {
  if (lambda == 1.0) return {2.0 / 3.0, 0.0};
  if (lambda == -1.0) return {1.0, 1.0 / 3.0};
  if (lambda > 1.0) return {0.0, 0.0};
  if (lambda < -1.0) return {1.0, 1.0};
  return {1.0, 0.0};
}

namespace detail {

inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw NumericError("scaling_exponents: degenerate fit", sxx);
  return sxy / sxx;
}

inline double reported_exponent(double slope, const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double variation = (*hi - *lo) / std::abs(*hi);
  return (std::abs(slope) < 0.02 && variation < 0.05) ? 0.0 : slope;
}

}  // namespace detail

/// Fits the exponents over the smallest `window` betas of a decreasing list.
inline ScalingFit scaling_exponents(double alpha, double lambda, const std::vector<double>& betas,
                                    std::size_t window = 4, double tol = 0.05) {
  if (betas.size() < 4) throw DomainError("scaling_exponents: need at least 4 betas");
  for (std::size_t i = 1; i < betas.size(); ++i)
    if (!(betas[i] < betas[i - 1])) throw DomainError("scaling_exponents: betas must decrease");
  std::vector<double> chain;
  if (betas.front() < 0.1) chain = beta_ladder(0.1, betas.front() * 10.0, 2);
  chain.insert(chain.end(), betas.begin(), betas.end());
  const auto path = support_path(alpha, lambda, chain);
  window = std::min(window, betas.size());
  std::vector<double> lb, la, lbb, av, bv;
  for (std::size_t i = path.size() - window; i < path.size(); ++i) {
    lb.push_back(std::log(path[i].beta));
    la.push_back(std::log(path[i].support.a));
    lbb.push_back(std::log(path[i].support.b));
    av.push_back(path[i].support.a);
    bv.push_back(path[i].support.b);
  }
  ScalingFit f;
  f.slope_a = detail::ls_slope(lb, la);
  f.slope_b = detail::ls_slope(lb, lbb);
  f.p_a = detail::reported_exponent(f.slope_a, av);
  f.p_b = detail::reported_exponent(f.slope_b, bv);
  const auto e = expected_exponents(lambda);
  f.expected_a = e[0];
  f.expected_b = e[1];
  f.match = std::abs(f.p_a - e[0]) <= tol && std::abs(f.p_b - e[1]) <= tol;
  return f;
}

/// Limits of delta and eta as beta -> 0; an unbounded entry carries its sign in `*_sign`.
struct RootLimits {
  double delta_limit = 0.0, eta_limit = 0.0;
  bool delta_unbounded = false, eta_unbounded = false;
  int delta_sign = 0, eta_sign = 0;
  // values at beta = probe_beta along the continuation chain
  double probe_beta = 0.0, delta_probe = 0.0, eta_probe = 0.0;
  double delta_rel_error = 0.0, eta_rel_error = 0.0;
};

inline RootLimits root_limits(double alpha, double lambda, double probe_beta = 1e-6) {
  RootLimits r;
  const double al = std::abs(lambda);
  if (al > 1.0) {
    r.delta_limit = alpha / (1.0 - al);
    r.eta_unbounded = true;
    r.eta_sign = 1;
  } else if (al < 1.0) {
    r.delta_unbounded = true;
    r.delta_sign = -1;
    r.eta_limit = alpha / (1.0 - lambda * lambda);
  } else {
    r.delta_unbounded = r.eta_unbounded = true;
    r.delta_sign = -1;
    r.eta_sign = 1;
  }
  auto chain = beta_ladder(0.1, probe_beta, 2);
  const auto path = support_path(alpha, lambda, chain);
  r.probe_beta = path.back().beta;
  r.delta_probe = path.back().roots.delta;
  r.eta_probe = path.back().roots.eta;
  if (!r.delta_unbounded) r.delta_rel_error = relative_difference(r.delta_probe, r.delta_limit);
  if (!r.eta_unbounded) r.eta_rel_error = relative_difference(r.eta_probe, r.eta_limit);
  return r;
}

/// max relative deviation of f at beta from (alpha + (lambda - 1) z)^2 over `zs`.
inline double f_limit_deviation(double alpha, double lambda, double beta, const std::vector<double>& zs) {
  const auto path = support_path(alpha, lambda, beta_ladder(0.1, beta, 2));
  const NaturalParams p{alpha, path.back().beta, lambda};
  double worst = 0.0;
  for (double z : zs) {
    const double lin = alpha + (lambda - 1.0) * z;
    worst = std::max(worst, relative_difference(f_polynomial(p, path.back().support, z), lin * lin));
  }
  return worst;
}

}  // namespace fgig

#endif  // FGIG_ASYMPTOTICS_HPP
