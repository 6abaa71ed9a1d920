#ifndef FGIG_TRANSFORMS_HPP
#define FGIG_TRANSFORMS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "fgig/measures.hpp"
#include "fgig/numeric.hpp"
#include "fgig/params.hpp"
#include "fgig/series.hpp"

namespace fgig {

/// sqrt(beta (eta - z)) on the closed lower half-plane. Real z > eta is read as the
/// limit from below, so the value there is +i sqrt(beta (z - eta)).
struct BranchedSqrt {
  double beta = 1.0;
  double eta = 0.0;

  cplx operator()(cplx z) const {
    cplx w = eta - z;
    if (w.imag() == 0.0) w = cplx(w.real(), 0.0);
    return std::sqrt(beta * w);
  }
};

/// R-transform r(z) of mu(alpha, beta, lambda) with its removable points filled in.
class FgigR {
 public:
  explicit FgigR(const FgigLaw& law) : law_(law), root_{law.beta(), law.roots.eta} {
    guard_ = 1e-5 * std::max(1.0, law.alpha());
    origin_ = series_at_origin(12);
    const double gap = law.roots.eta - law.alpha();
    if (law.lambda() < 0.0 && guard_ < 0.25 * gap) alpha_series_ = series_at_alpha(12);
  }
  explicit FgigR(const NaturalParams& p) : FgigR(FgigLaw(p)) {}

  const FgigLaw& law() const { return law_; }

  cplx operator()(cplx z) const {
    const double al = law_.alpha(), l = law_.lambda();
    if (std::abs(z) < guard_) return origin_.evaluate(z);
    const cplx t = z - al;
    if (t == 0.0) {
      if (l > 0.0) throw SingularPointError("r_fgig: pole at z = alpha", z, -l);
      if (l == 0.0) throw SingularPointError("r_fgig: branch point at z = alpha", z, 0.0);
    }
    if (l < 0.0 && alpha_series_ && std::abs(t) < guard_) return alpha_series_->evaluate(t);
    if (l == 0.0) {
      const BranchedSqrt s{1.0, al};
      return -0.5 / z + std::sqrt(law_.beta()) * (z - law_.roots.delta) / (z * s(z));
    }
    return closed_form(z);
  }

  cplx closed_form(cplx z) const {
    const double al = law_.alpha(), l = law_.lambda();
    return (-al + (l + 1.0) * z + 2.0 * (z - law_.roots.delta) * root_(z)) / (2.0 * z * (al - z));
  }

  /// Taylor coefficients of r at 0 through z^order.
  TruncatedSeries<double> series_at_origin(std::size_t order) const {
    const double al = law_.alpha(), l = law_.lambda(), be = law_.beta();
    const double eta = law_.roots.eta, delta = law_.roots.delta;
    const std::size_t n = order + 1;
    const auto t = TruncatedSeries<double>::variable(n);
    // sqrt(beta (eta - t)) = sqrt(beta eta) (1 - t/eta)^{1/2}
    const auto root = (TruncatedSeries<double>::constant(n, 1.0) - t * (1.0 / eta)).pow(0.5) * std::sqrt(be * eta);
    auto num = (t * (l + 1.0) + (-al)) + (t + (-delta)) * root * 2.0;
    num[0] = 0.0;  // vanishes identically by 4 beta eta delta^2 = alpha^2
    const auto den = (TruncatedSeries<double>::constant(n, al) - t) * 2.0;
    return (num.shift_down().truncated(order)) / den.truncated(order);
  }

  /// Taylor coefficients of r at alpha in t = z - alpha (removable case lambda < 0).
  TruncatedSeries<double> series_at_alpha(std::size_t order) const {
    const double al = law_.alpha(), l = law_.lambda(), be = law_.beta();
    const double gap = law_.roots.eta - al, delta = law_.roots.delta;
    const std::size_t n = order + 1;
    const auto t = TruncatedSeries<double>::variable(n);
    const auto root = (TruncatedSeries<double>::constant(n, 1.0) - t * (1.0 / gap)).pow(0.5) * std::sqrt(be * gap);
    auto num = (t * (l + 1.0) + l * al) + (t + (al - delta)) * root * 2.0;
    num[0] = 0.0;
    const auto den = (t + al) * -2.0;
    return num.shift_down().truncated(order) / den.truncated(order);
  }

 private:
  FgigLaw law_;
  BranchedSqrt root_;
  double guard_;
  TruncatedSeries<double> origin_;
  std::optional<TruncatedSeries<double>> alpha_series_;
};

inline cplx r_fgig(const FgigLaw& law, cplx z) { return FgigR(law)(z); }
inline cplx r_fgig(const NaturalParams& p, cplx z) { return FgigR(p)(z); }

inline cplx r_free_poisson(const FreePoissonParams& fp, cplx z) {
  const cplx d = 1.0 - fp.jump * z;
  if (d == 0.0) throw SingularPointError("r_free_poisson: pole at z = 1/jump", z, -fp.rate);
  return fp.jump * fp.rate / d;
}

/// kappa_1 .. kappa_n of mu(alpha, beta, lambda).
inline std::vector<double> free_cumulants(const FgigLaw& law, std::size_t n) {
  if (n == 0 || n > 64) throw DomainError("free_cumulants: order must lie in [1, 64]");
  const auto s = FgigR(law).series_at_origin(n - 1);
  return {s.coefficients().begin(), s.coefficients().end()};
}
inline std::vector<double> free_cumulants(const NaturalParams& p, std::size_t n) {
  return free_cumulants(FgigLaw(p), n);
}

inline std::vector<double> free_cumulants(const FreePoissonParams& fp, std::size_t n) {
  if (n == 0 || n > 64) throw DomainError("free_cumulants: order must lie in [1, 64]");
  std::vector<double> k(n);
  double g = fp.jump;
  for (std::size_t i = 0; i < n; ++i, g *= fp.jump) k[i] = fp.rate * g;
  return k;
}

/// G(z) = int dmu(x) / (z - x), for z off the support and atoms.
inline cplx cauchy(const SpectralMeasure& m, cplx z) {
  if (z.imag() == 0.0) {
    const double x = z.real();
    for (const auto& a : m.atoms())
      if (a.location == x && a.weight > 0.0) throw DomainError("cauchy: z is an atom");
    if (m.continuous() && m.continuous()->support().contains(x)) throw DomainError("cauchy: z lies on the support");
  }
  cplx g = 0.0;
  for (const auto& a : m.atoms()) g += a.weight / (z - a.location);
  if (m.continuous()) g += m.continuous()->cauchy(z);
  return g;
}

/// Same as cauchy() but always via the quadrature rule of the continuous part.
inline cplx cauchy_quadrature(const SpectralMeasure& m, cplx z) {
  cplx g = 0.0;
  for (const auto& a : m.atoms()) g += a.weight / (z - a.location);
  if (m.continuous()) g += m.continuous()->cauchy_quadrature(z);
  return g;
}

using ComplexFn = std::function<cplx(cplx)>;

namespace detail {

// Newton on r(w) + 1/w = z starting from `seed`, derivative by complex differences.
inline std::optional<cplx> invert_r(const ComplexFn& r, cplx z, cplx seed, double tol, int max_iter) {
  cplx w = seed;
  auto F = [&](cplx v) { return r(v) + 1.0 / v - z; };
  for (int it = 0; it < max_iter; ++it) {
    cplx f;
    try {
      f = F(w);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    if (std::abs(f) <= tol * std::max(1.0, std::abs(z))) return w;
    const double h = 1e-7 * std::max(std::abs(w), 1e-3);
    cplx d;
    try {
      d = (F(w + cplx(0.0, -h)) - F(w + cplx(0.0, h))) / cplx(0.0, -2.0 * h);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    if (d == 0.0 || !std::isfinite(std::abs(d))) return std::nullopt;
    cplx step = f / d;
    // keep iterates in the closed lower half-plane where r is defined
    double damp = 1.0;
    cplx next = w - step;
    while (next.imag() > 0.0 && damp > 1e-6) {
      damp *= 0.5;
      next = w - damp * step;
    }
    if (next.imag() > 0.0) next = cplx(next.real(), 0.0);
    w = next;
    if (!std::isfinite(std::abs(w))) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

/// Solves r(w) + 1/w = z for w = G(z), z in the upper half-plane.
inline cplx cauchy_from_r(const ComplexFn& r, cplx z, std::optional<cplx> seed = std::nullopt) {
  if (!(z.imag() > 0.0)) throw DomainError("cauchy_from_r: z must lie in the upper half-plane");
  constexpr double tol = 1e-12;
  if (auto w = detail::invert_r(r, z, seed.value_or(1.0 / z), tol, 60)) return *w;
  // homotopy from far up the imaginary direction, where G ~ 1/z
  for (int attempt = 1; attempt <= 8; ++attempt) {
    const int steps = 8 * attempt;
    const double lift = 10.0 * attempt * std::max(1.0, std::abs(z));
    cplx w = 1.0 / (z + cplx(0.0, lift));
    bool ok = true;
    for (int k = steps; k >= 0; --k) {
      const cplx zk = z + cplx(0.0, lift * static_cast<double>(k) / steps);
      auto next = detail::invert_r(r, zk, w, k == 0 ? tol : 1e-10, 60);
      if (!next) {
        ok = false;
        break;
      }
      w = *next;
    }
    if (ok) return w;
  }
  const cplx w0 = 1.0 / z;
  throw NumericError("cauchy_from_r: Newton did not converge", std::abs(r(w0) + 1.0 / w0 - z));
}

/// Rungs of the Stieltjes ladder eps_k = eps0 * 2^-k.
inline std::vector<double> default_eps_ladder() {
  std::vector<double> e(8);
  for (int k = 0; k < 8; ++k) e[k] = 1e-2 * std::ldexp(1.0, -k);
  return e;
}

struct StieltjesEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// -Im G(x + i eps)/pi on a halving ladder, with Richardson elimination of the eps
/// and eps^2 terms. Never throws on a poorly converged ladder; reports its spread.
inline StieltjesEstimate stieltjes_estimate(const ComplexFn& G, double x, const std::vector<double>& ladder) {
  const std::size_t n = ladder.size();
  if (n < 3) throw DomainError("stieltjes: ladder needs at least 3 rungs");
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = -G(cplx(x, ladder[k])).imag() / pi;
  // general Richardson in eps for arbitrary (decreasing) rungs
  std::vector<double> r1(n - 1), r2(n - 2);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double q = ladder[k] / ladder[k + 1];
    r1[k] = (q * h[k + 1] - h[k]) / (q - 1.0);
  }
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const double q = ladder[k] / ladder[k + 2];
    const double q2 = q * q;
    r2[k] = (q2 * r1[k + 1] - r1[k]) / (q2 - 1.0);
  }
  const double v = r2.back();
  const double err = r2.size() >= 2 ? std::abs(r2.back() - r2[r2.size() - 2]) : std::abs(v - h.back());
  return {std::max(0.0, v), err};
}

inline double stieltjes_density(const ComplexFn& G, double x, const std::vector<double>& ladder = default_eps_ladder(),
                                double tol = 1e-3) {
  const auto e = stieltjes_estimate(G, x, ladder);
  if (!(e.error <= tol * std::max(1.0, e.value))) throw NumericError("stieltjes_density: ladder did not settle", e.error);
  return e.value;
}

struct FidSample {
  cplx z;
  double imag_r;
};

struct FidCertificate {
  double max_imag = -std::numeric_limits<double>::infinity();
  cplx argmax{};
  std::size_t samples = 0;
  double tolerance = 1e-9;
  bool pass = false;
};

struct FidGrid {
  std::size_t real_points = 200;
  std::size_t imag_points = 200;
  std::size_t boundary_points = 2000;
  std::size_t arc_points = 200;
  unsigned threads = 1;
};

/// Samples Im r on a lower half-plane grid (log-spaced depths, down to 1e-8 below the
/// axis), on the real axis approached from below, and on small arcs around z = alpha.
inline FidCertificate fid_certificate(const FgigLaw& law, const FidGrid& g = {}) {
  const FgigR r(law);
  const double al = law.alpha(), eta = law.roots.eta;
  const double scale = std::max({1.0, eta, -law.roots.delta, -law.roots.gamma});
  const double lo = -3.0 * scale, hi = 3.0 * scale;
  std::vector<cplx> pts;
  pts.reserve(g.real_points * g.imag_points + g.boundary_points + 3 * g.arc_points);
  const auto xs = linspace(lo, hi, g.real_points);
  for (std::size_t j = 0; j < g.imag_points; ++j) {
    const double frac = g.imag_points == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(g.imag_points - 1);
    const double depth = 1e-8 * std::pow(4.0 * scale / 1e-8, frac);
    for (double x : xs) pts.emplace_back(x, -depth);
  }
  for (double x : linspace(lo, hi, g.boundary_points)) pts.emplace_back(x, -0.0);
  pts.emplace_back(eta, -0.0);
  for (double rho : {1e-6, 1e-3, 1e-1 * std::min(al, std::max(eta - al, 1e-3))}) {
    for (std::size_t k = 0; k < g.arc_points; ++k) {
      const double th = -pi * static_cast<double>(k + 1) / static_cast<double>(g.arc_points + 1);
      pts.push_back(al + rho * std::polar(1.0, th));
    }
  }
  std::vector<double> im(pts.size(), -std::numeric_limits<double>::infinity());
  parallel_for(pts.size(), g.threads, [&](std::size_t i) {
    try {
      im[i] = r(pts[i]).imag();
    } catch (const SingularPointError&) {
    }
  });
  FidCertificate c;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!std::isfinite(im[i])) continue;
    ++c.samples;
    if (im[i] > c.max_imag) {
      c.max_imag = im[i];
      c.argmax = pts[i];
    }
  }
  c.pass = c.max_imag <= c.tolerance;
  return c;
}

}  // namespace fgig

#endif  // FGIG_TRANSFORMS_HPP
