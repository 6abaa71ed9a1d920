#ifndef FGIG_ENTROPY_HPP
#define FGIG_ENTROPY_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fgig/measures.hpp"
#include "fgig/numeric.hpp"
#include "fgig/params.hpp"

namespace fgig {

/// V(x) = (1 - lambda) log x + alpha x + beta / x on x > 0.
struct Potential {
  double alpha = 1.0;
  double beta = 1.0;
  double lambda = 0.0;

  double operator()(double x) const { return (1.0 - lambda) * std::log(x) + alpha * x + beta / x; }
  /// argmin of V, also the mode of exp(-V)
  double minimizer() const {
    const double l = lambda - 1.0;
    const double disc = std::sqrt(l * l + 4.0 * alpha * beta);
    // positive root of alpha x^2 - (lambda - 1) x - beta, written without cancellation
    return l >= 0.0 ? (l + disc) / (2.0 * alpha) : 2.0 * beta / (disc - l);
  }
};

inline Potential potential(const NaturalParams& p) { return {p.alpha, p.beta, p.lambda}; }

/// log of exp(w) K_nu(w) from K_nu(w) = int_0^inf exp(-w cosh t) cosh(nu t) dt.
inline double log_scaled_bessel_k(double nu, double w) {
  if (!(w > 0.0)) throw DomainError("bessel_k: argument must be positive");
  nu = std::abs(nu);
  static const QuadratureRule rule = gauss_legendre(64);
  // log of the scaled integrand exp(-w (cosh t - 1)) cosh(nu t)
  auto log_f = [&](double t) {
    const double lc = nu * t + std::log1p(std::exp(-2.0 * nu * t)) - std::log(2.0);
    return -w * 2.0 * std::sinh(0.5 * t) * std::sinh(0.5 * t) + lc;
  };
  // the integrand peaks where w sinh t = nu tanh(nu t) <= nu
  const double peak = std::max(0.0, std::asinh(nu / w));
  const double lmax = log_f(peak);
  const double cut = lmax + std::log(1e-18);
  double acc = 0.0;
  for (int k = 0;; ++k) {
    const double lo = k, hi = k + 1.0;
    double s = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double t = 0.5 * (lo + hi) + 0.5 * rule.nodes[j];
      s += rule.weights[j] * std::exp(log_f(t) - lmax);
    }
    acc += 0.5 * s;
    if (hi > peak && log_f(hi) < cut) break;
    if (k > 10000) throw NumericError("bessel_k: truncation point not reached", log_f(hi) - lmax);
  }
  return std::log(acc) + lmax;
}

inline double bessel_k(double nu, double w) { return std::exp(log_scaled_bessel_k(nu, w) - w); }

/// log of the normalizing constant (alpha/beta)^{lambda/2} / (2 K_lambda(2 sqrt(alpha beta))).
inline double gig_log_normalizer(double alpha, double beta, double lambda) {
  const double w = 2.0 * std::sqrt(alpha * beta);
  return 0.5 * lambda * std::log(alpha / beta) - std::log(2.0) - (log_scaled_bessel_k(lambda, w) - w);
}

/// log of the classical GIG density at x > 0.
inline double classical_gig_log_density(double alpha, double beta, double lambda, double x) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("classical_gig_density: alpha and beta must be positive");
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return gig_log_normalizer(alpha, beta, lambda) - Potential{alpha, beta, lambda}(x);
}

/// Classical GIG density, proportional to exp(-V(x)).
inline double classical_gig_density(double alpha, double beta, double lambda, double x) {
  return std::exp(classical_gig_log_density(alpha, beta, lambda, x));
}

/// -log of the normalizing constant: the upper bound of H over densities on (0, inf).
inline double gibbs_bound(double alpha, double beta, double lambda) {
  return -gig_log_normalizer(alpha, beta, lambda);
}

using DensityFn = std::function<double(double)>;

/// int_0^inf g(x) dx via x = exp(u), split at `center` and extended unit panel by unit
/// panel until both the panel integral and the weight p x e^u fall below tolerance.
inline double integrate_half_line(const std::function<double(double)>& g, const DensityFn& p, double center,
                                  double tol = 1e-15) {
  const double u0 = std::log(center);
  auto in_u = [&](double u) {
    const double x = std::exp(u);
    return g(x) * x;
  };
  double total = 0.0;
  for (int dir : {-1, 1}) {
    int quiet = 0;
    for (int k = 0; k < 400; ++k) {
      const double a = u0 + dir * k, b = u0 + dir * (k + 1);
      const double lo = std::min(a, b), hi = std::max(a, b);
      const double part = integrate_adaptive(in_u, lo, hi, tol, 40);
      if (!std::isfinite(part)) throw NumericError("integrate_half_line: divergent integral", part);
      const double weight = integrate_adaptive([&](double u) { const double x = std::exp(u); return p(x) * x; }, lo, hi,
                                               tol, 40);
      total += part;
      quiet = (std::abs(part) < tol && weight < tol) ? quiet + 1 : 0;
      if (quiet >= 2) break;
      if (k == 399) throw NumericError("integrate_half_line: integral does not settle", std::abs(part));
    }
  }
  return total;
}

inline double xlogx_term(double px) { return px > 0.0 ? px * std::log(px) : 0.0; }

/// -int p log q with q given by its log-density, so q may underflow where p does not.
inline double cross_entropy(const DensityFn& p, const DensityFn& log_q, double center) {
  return -integrate_half_line([&](double x) {
    const double px = p(x);
    if (!(px > 0.0)) return 0.0;
    return px * log_q(x);
  }, p, center);
}

/// H(p) = -int p log p - int V p.
inline double classical_entropy(const DensityFn& p, const Potential& V) {
  const double center = V.minimizer();
  return -integrate_half_line([&](double x) {
    const double px = p(x);
    return xlogx_term(px) + px * V(x);
  }, p, center);
}

/// I(mu) = int int log|x - y| dmu dmu - int V dmu, with log|x - y| expanded in Chebyshev
/// polynomials on the support: log|t - s| = -log 2 - sum_n (2/n) T_n(t) T_n(s).
/// The moments int T_n dmu come from the midpoint rule in theta, x = c - h cos(theta).
inline double free_entropy(const SpectralMeasure& m, const Potential& V, std::size_t nodes = 512) {
  if (!m.atoms().empty()) throw DomainError("free_entropy: measure has atoms");
  if (!m.continuous()) throw DomainError("free_entropy: measure has no density");
  const auto s = m.support();
  if (!(s.lo > 0.0)) throw DomainError("free_entropy: support must lie in (0, inf)");
  if (nodes < 8) throw DomainError("free_entropy: too few nodes");
  const double c = 0.5 * (s.lo + s.hi), h = 0.5 * (s.hi - s.lo);
  const std::size_t N = nodes;
  std::vector<double> theta(N), w(N);
  double pot = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    theta[j] = pi * (static_cast<double>(j) + 0.5) / static_cast<double>(N);
    const double x = c - h * std::cos(theta[j]);
    w[j] = m.density(x) * h * std::sin(theta[j]) * pi / static_cast<double>(N);
    pot += w[j] * V(x);
  }
  double m0 = 0.0;
  for (double v : w) m0 += v;
  double energy = m0 * m0 * std::log(0.5 * h);
  for (std::size_t n = 1; n < N; ++n) {
    double mn = 0.0;
    for (std::size_t j = 0; j < N; ++j) mn += w[j] * std::cos(static_cast<double>(n) * theta[j]);
    energy -= 2.0 / static_cast<double>(n) * mn * mn;
  }
  return energy - pot;
}

/// A competitor for the free entropy: an fGIG law, optionally dilated by `scale`.
struct Perturbation {
  std::string label;
  NaturalParams params;
  double scale = 1.0;
};

struct MaximalityEntry {
  Perturbation perturbation;
  double value = 0.0;
  double margin = 0.0;  // I(base) - I(perturbed)
};

struct MaximalityReport {
  NaturalParams params;
  double base_value = 0.0;
  std::vector<MaximalityEntry> entries;
  bool all_positive = false;  // over entries that differ from the base
};

inline SpectralMeasure perturbed_measure(const Perturbation& p) {
  auto m = build_fgig(p.params);
  return p.scale == 1.0 ? m : dilate(m, p.scale);
}

inline MaximalityReport maximality_scan(const NaturalParams& p, const std::vector<Perturbation>& perturbations,
                                        std::size_t nodes = 512) {
  if (!validate(p).valid()) throw DomainError("maximality_scan: invalid parameters");
  MaximalityReport r;
  r.params = p;
  const Potential V = potential(p);
  r.base_value = free_entropy(build_fgig(p), V, nodes);
  r.all_positive = true;
  for (const auto& q : perturbations) {
    MaximalityEntry e{q};
    e.value = free_entropy(perturbed_measure(q), V, nodes);
    e.margin = r.base_value - e.value;
    const bool same = q.scale == 1.0 && q.params.alpha == p.alpha && q.params.beta == p.beta && q.params.lambda == p.lambda;
    if (!same && !(e.margin > 0.0)) r.all_positive = false;
    r.entries.push_back(e);
  }
  return r;
}

/// Perturbations used by the default scan: dilations and one-parameter shifts.
inline std::vector<Perturbation> default_perturbations(const NaturalParams& p) {
  return {
      {"identity", p, 1.0},
      {"scale 1.1", p, 1.1},
      {"scale 0.9", p, 0.9},
      {"alpha +10%", {p.alpha * 1.1, p.beta, p.lambda}, 1.0},
      {"beta -10%", {p.alpha, p.beta * 0.9, p.lambda}, 1.0},
      {"lambda +0.2", {p.alpha, p.beta, p.lambda + 0.2}, 1.0},
      {"lambda -0.2", {p.alpha, p.beta, p.lambda - 0.2}, 1.0},
  };
}

}  // namespace fgig

#endif  // FGIG_ENTROPY_HPP
