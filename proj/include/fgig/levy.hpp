#ifndef FGIG_LEVY_HPP
#define FGIG_LEVY_HPP

#include <array>
#include <cmath>
#include <vector>

#include "fgig/numeric.hpp"
#include "fgig/params.hpp"
#include "fgig/transforms.hpp"

namespace fgig {

/// Density of the free Levy measure of mu(alpha, beta, lambda) on (0, 1/eta).
inline double levy_density(const FgigLaw& law, double x) {
  const double eta = law.roots.eta, al = law.alpha();
  if (!(x > 0.0) || x >= 1.0 / eta) return 0.0;
  const double lead = (1.0 - law.roots.delta * x) / (pi * x * std::sqrt(x));
  // at lambda = 0, sqrt(1 - eta x) cancels against 1 - alpha x
  if (law.lambda() == 0.0) return lead * std::sqrt(law.beta() / (1.0 - al * x));
  return lead * std::sqrt(law.beta() * std::max(0.0, 1.0 - eta * x)) / (1.0 - al * x);
}

inline double levy_density(const NaturalParams& p, double x) { return levy_density(FgigLaw(p), x); }

/// Free Levy-Khintchine triplet in the regular (drift, Levy measure) form.
struct LevyTriplet {
  FgigLaw law;
  double drift = 0.0;
  double semicircular = 0.0;
  double atom_location = 0.0;
  double atom_weight = 0.0;

  double density(double x) const { return levy_density(law, x); }
  double upper() const { return 1.0 / law.roots.eta; }
};

namespace detail {

// lim r(u) and lim r(u)/u as u -> -inf. r is analytic in s = |u|^{-1/2} at s = 0.
inline std::array<double, 2> r_limits_at_minus_infinity(const FgigR& r) {
  std::vector<double> s, drift, semi;
  // half-decade steps from u = -1e2 to u = -1e6
  for (int k = 4; k <= 12; ++k) {
    const double u = -std::pow(10.0, 0.5 * k);
    const cplx v = r(cplx(u, -0.0));
    s.push_back(1.0 / std::sqrt(-u));
    drift.push_back(v.real());
    semi.push_back(v.real() / u);
  }
  if (std::abs(drift.back()) > std::abs(drift.front()))
    throw NumericError("levy_triplet: r(u) does not decay as u -> -inf", std::abs(drift.back()));
  return {neville_at_zero(s, drift), neville_at_zero(s, semi)};
}

}  // namespace detail

inline LevyTriplet levy_triplet(const FgigLaw& law) {
  LevyTriplet t{law};
  const auto lim = detail::r_limits_at_minus_infinity(FgigR(law));
  t.drift = lim[0];
  t.semicircular = lim[1];
  t.atom_location = 1.0 / law.alpha();
  t.atom_weight = std::max(law.lambda(), 0.0);
  return t;
}

inline LevyTriplet levy_triplet(const NaturalParams& p) { return levy_triplet(FgigLaw(p)); }

/// int (1/(1 - z x) - 1) tau(dx) over the density part. With x = u^2 and
/// u = sin(phi)/sqrt(eta) the integrand is bounded on [0, pi/2].
inline cplx levy_integral(const LevyTriplet& t, cplx z, double tol = 1e-13) {
  const double eta = t.law.roots.eta, al = t.law.alpha(), de = t.law.roots.delta;
  const double sb = std::sqrt(t.law.beta()), se = std::sqrt(eta);
  const double ratio = al / eta;
  auto f = [&](double phi) -> cplx {
    const double s = std::sin(phi), c = std::cos(phi);
    const double u2 = s * s / eta;
    // cos^2 / (1 - alpha u^2); exactly 1 when alpha = eta
    const double shape = t.law.lambda() == 0.0 ? 1.0 : c * c / (1.0 - ratio * s * s);
    return 2.0 * z * (1.0 - de * u2) * sb * shape / (pi * se * (1.0 - z * u2));
  };
  return integrate_adaptive(f, 0.0, 0.5 * pi, tol * std::max(1.0, std::abs(z)), 50);
}

/// drift z + atom term + Levy integral; equals z r(z) for the fGIG triplet.
inline cplx reconstruct_cumulant(const LevyTriplet& t, cplx z) {
  cplx c = t.drift * z + t.semicircular * z * z;
  if (t.atom_weight > 0.0) c += t.atom_weight * (1.0 / (1.0 - z * t.atom_location) - 1.0);
  return c + levy_integral(t, z);
}

/// int min(1, x) tau(dx) including the atom. With x = sin^2(phi)/eta, x tau(x) dx is
/// bounded in phi.
inline double levy_small_jump_integral(const LevyTriplet& t) {
  const double eta = t.law.roots.eta, al = t.law.alpha(), de = t.law.roots.delta;
  const double ratio = al / eta, lead = 2.0 * std::sqrt(t.law.beta() / eta) / pi;
  const bool zero = t.law.lambda() == 0.0;
  auto x_of = [eta](double phi) {
    const double s = std::sin(phi);
    return s * s / eta;
  };
  auto first = [&](double phi) {
    const double s = std::sin(phi), c = std::cos(phi);
    const double shape = zero ? 1.0 : c * c / (1.0 - ratio * s * s);
    return lead * (1.0 - de * x_of(phi)) * shape;
  };
  if (1.0 / eta <= 1.0) return integrate_adaptive(first, 0.0, 0.5 * pi, 1e-13) + t.atom_weight * t.atom_location;
  const double split = std::asin(std::sqrt(eta));
  auto second = [&](double phi) { return first(phi) / x_of(phi); };
  return integrate_adaptive(first, 0.0, split, 1e-13) + integrate_adaptive(second, split, 0.5 * pi, 1e-13) +
         t.atom_weight * std::min(1.0, t.atom_location);
}

/// Discriminant of g(x) = 1 + (delta - 3 alpha) x + (2 alpha eta - 2 eta delta + alpha delta) x^2.
inline double fsd_discriminant(double alpha, const SpectralRoots& r) {
  const double lin = r.delta - 3.0 * alpha;
  return lin * lin - 4.0 * (2.0 * alpha * r.eta - 2.0 * r.eta * r.delta + alpha * r.delta);
}

/// The same discriminant written in spread coordinates.
inline double fsd_discriminant(const SpreadForm& s) {
  const double A = s.A, B = s.B, l = s.lambda;
  return 4.0 * (B + l * A) * (8.0 * l * l * A * A * A - 9.0 * l * l * A * A * B + B * B * B) /
         (A * A * B * (A - B) * (A - B) * (B - l * A));
}

/// -B^{3/2} / (A sqrt(9B - 8A)): the largest lambda at which mu is FSD for fixed (A, B).
inline double fsd_threshold(double A, double B) { return -B * std::sqrt(B) / (A * std::sqrt(9.0 * B - 8.0 * A)); }

struct FsdReport {
  NaturalParams params;
  double A = 0.0, B = 0.0;
  double discriminant = 0.0;
  double discriminant_closed = 0.0;
  double threshold = 0.0;
  double quadratic_coefficient = 0.0;
  bool verdict = false;
  /// lambda > 0: the Levy measure has an atom, so it has no density k(x)/x at all.
  bool atom_obstruction = false;
  bool k_nonincreasing = false;
  double max_k_increment = 0.0;
  bool agree = false;
};

/// Checks k(x) = x tau(x) for monotone decrease on `points` interior points of (0, 1/eta).
inline std::pair<bool, double> k_monotone(const FgigLaw& law, std::size_t points = 10000, double tol = 1e-9) {
  const double top = 1.0 / law.roots.eta;
  double worst = -std::numeric_limits<double>::infinity();
  bool ok = true;
  double prev = 0.0;
  for (std::size_t i = 1; i <= points; ++i) {
    const double x = top * static_cast<double>(i) / static_cast<double>(points + 1);
    const double k = x * levy_density(law, x);
    if (i > 1) {
      const double inc = (k - prev) / std::max(1.0, std::abs(prev));
      worst = std::max(worst, inc);
      if (inc > tol) ok = false;
    }
    prev = k;
  }
  return {ok, worst};
}

inline FsdReport fsd_report(const FgigLaw& law) {
  FsdReport r;
  r.params = law.params;
  r.A = law.spread.A;
  r.B = law.spread.B;
  r.discriminant = fsd_discriminant(law.alpha(), law.roots);
  r.discriminant_closed = fsd_discriminant(law.spread);
  r.threshold = fsd_threshold(r.A, r.B);
  r.quadratic_coefficient = 2.0 * law.alpha() * law.roots.eta - 2.0 * law.roots.eta * law.roots.delta +
                            law.alpha() * law.roots.delta;
  r.verdict = law.lambda() > 0.0 ? false : r.discriminant_closed <= 0.0;
  const auto [mono, worst] = k_monotone(law);
  r.k_nonincreasing = mono;
  r.max_k_increment = worst;
  r.atom_obstruction = law.lambda() > 0.0;
  // the density check decides only when the Levy measure is absolutely continuous
  r.agree = r.atom_obstruction ? !r.verdict : r.verdict == r.k_nonincreasing;
  return r;
}

inline FsdReport fsd_report(const NaturalParams& p) { return fsd_report(FgigLaw(p)); }

}  // namespace fgig

#endif  // FGIG_LEVY_HPP
