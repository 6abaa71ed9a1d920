#ifndef FGIG_CONVOLUTION_HPP
#define FGIG_CONVOLUTION_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "fgig/measures.hpp"
#include "fgig/numeric.hpp"
#include "fgig/transforms.hpp"

namespace fgig {

struct SubordinationPair {
  cplx omega1;
  cplx omega2;
  cplx cauchy;  // G of the convolution at z
  double residual = 0.0;
  int iterations = 0;
};

struct SubordinationOptions {
  double tolerance = 1e-12;
  int max_iterations = 500;
  double damping = 0.5;
  /// damped steps before switching to Newton on T(w) - w
  int damped_steps = 40;
};

namespace detail {

// h(w) = 1/G(w) - w maps the upper half-plane into its closure.
inline cplx h_transform(const SpectralMeasure& m, cplx w) { return 1.0 / cauchy(m, w) - w; }

}  // namespace detail

/// Fixed point of w -> z + h_nu(z + h_mu(w)): omega1 for mu, omega2 = z + h_mu(omega1) for nu.
inline SubordinationPair subordination_at(const SpectralMeasure& mu, const SpectralMeasure& nu, cplx z,
                                          const SubordinationOptions& opt = {},
                                          std::optional<cplx> start = std::nullopt) {
  if (!(z.imag() > 0.0)) throw DomainError("subordination_at: z must lie in the upper half-plane");
  auto T = [&](cplx w) { return z + detail::h_transform(nu, z + detail::h_transform(mu, w)); };
  auto scale = [](cplx w) { return std::max(1.0, std::abs(w)); };
  cplx w = start.value_or(z + cplx(0.0, 1.0));
  if (w.imag() < z.imag()) w = cplx(w.real(), z.imag());
  double res = std::abs(T(w) - w);
  int it = 0;
  bool newton = false;
  while (it < opt.max_iterations && !(res <= opt.tolerance * scale(w))) {
    ++it;
    if (!newton && (it > opt.damped_steps || res < 1e-4 * scale(w))) newton = true;
    if (newton) {
      const cplx tw = T(w);
      const cplx phi = tw - w;
      const double h = 1e-7 * scale(w);
      const cplx dphi = (T(w + h) - T(w - h)) / (2.0 * h) - 1.0;
      cplx next = dphi != 0.0 ? w - phi / dphi : tw;
      double next_res = next.imag() >= z.imag() ? std::abs(T(next) - next) : HUGE_VAL;
      if (!(next_res < res)) {
        // fall back to a damped step and retry Newton later
        next = (1.0 - opt.damping) * w + opt.damping * tw;
        next_res = std::abs(T(next) - next);
        newton = false;
      }
      w = next;
      res = next_res;
    } else {
      w = (1.0 - opt.damping) * w + opt.damping * T(w);
      res = std::abs(T(w) - w);
    }
  }
  if (!(res <= opt.tolerance * scale(w))) throw NumericError("subordination_at: no convergence", res);
  SubordinationPair p;
  p.omega1 = w;
  p.omega2 = z + detail::h_transform(mu, w);
  p.cauchy = cauchy(mu, w);
  p.residual = res;
  p.iterations = it;
  return p;
}

struct ConvolveOptions {
  std::size_t points = 2001;
  double margin = 0.05;
  std::vector<double> ladder = default_eps_ladder();
  /// densities below this fraction of the peak are treated as zero
  double zero_fraction = 1e-6;
  unsigned threads = 1;
  /// second pass on a grid clustered at the support edges found by the first pass
  bool refine_edges = true;
  SubordinationOptions subordination{};
};

struct ConvolutionResult {
  SpectralMeasure measure;
  std::vector<double> grid;
  std::vector<double> density;
  double max_identity_residual = 0.0;  // |w1 + w2 - 1/G - z|
  double min_imag_excess = 0.0;         // min over points of Im w_i - Im z
  bool exact_translation = false;
};

namespace detail {

inline std::optional<double> single_atom(const SpectralMeasure& m) {
  if (m.continuous() || m.atoms().size() != 1) return std::nullopt;
  return m.atoms().front().location;
}

inline void recover_density(const SpectralMeasure& mu, const SpectralMeasure& nu, std::vector<double> grid,
                            const ConvolveOptions& opt, ConvolutionResult& out) {
  const std::size_t n = grid.size();
  out.grid = std::move(grid);
  out.density.assign(n, 0.0);
  std::vector<double> ident(n, 0.0), excess(n, HUGE_VAL);
  parallel_for(n, opt.threads, [&](std::size_t i) {
    const double x = out.grid[i];
    std::optional<cplx> warm;
    auto G = [&](cplx z) {
      const auto sp = subordination_at(mu, nu, z, opt.subordination, warm);
      warm = sp.omega1;
      ident[i] = std::max(ident[i], std::abs(sp.omega1 + sp.omega2 - 1.0 / sp.cauchy - z));
      excess[i] = std::min({excess[i], sp.omega1.imag() - z.imag(), sp.omega2.imag() - z.imag()});
      return sp.cauchy;
    };
    out.density[i] = stieltjes_estimate(G, x, opt.ladder).value;
  });
  out.max_identity_residual = 0.0;
  out.min_imag_excess = HUGE_VAL;
  for (std::size_t i = 0; i < n; ++i) {
    out.max_identity_residual = std::max(out.max_identity_residual, ident[i]);
    out.min_imag_excess = std::min(out.min_imag_excess, excess[i]);
  }
  const double peak = *std::max_element(out.density.begin(), out.density.end());
  out.measure = SpectralMeasure({}, std::make_shared<TabulatedPart>(out.grid, out.density, opt.zero_fraction * peak));
}

}  // namespace detail

/// mu boxplus nu, recovered on a real grid by Stieltjes inversion of G_mu(omega1).
inline ConvolutionResult free_convolve(const SpectralMeasure& mu, const SpectralMeasure& nu,
                                       const ConvolveOptions& opt = {}) {
  ConvolutionResult out;
  // a point mass only shifts the other law
  if (auto p = detail::single_atom(nu)) {
    out.measure = translate(mu, *p);
    out.exact_translation = true;
    return out;
  }
  if (auto p = detail::single_atom(mu)) {
    out.measure = translate(nu, *p);
    out.exact_translation = true;
    return out;
  }
  if (opt.points < 3) throw DomainError("free_convolve: need at least 3 grid points");
  const auto s1 = mu.support(), s2 = nu.support();
  const double lo = s1.lo + s2.lo, hi = s1.hi + s2.hi;
  const double pad = opt.margin * (hi - lo);
  detail::recover_density(mu, nu, linspace(lo - pad, hi + pad, opt.points), opt, out);
  if (opt.refine_edges) {
    // x = c - h cos(theta) puts cells of width O(h / n^2) at both edges
    const auto found = out.measure.support();
    const double cell = (hi - lo + 2.0 * pad) / static_cast<double>(opt.points - 1);
    const double left = std::max(lo - pad, found.lo - 2.0 * cell), right = std::min(hi + pad, found.hi + 2.0 * cell);
    const double c = 0.5 * (left + right), h = 0.5 * (right - left);
    std::vector<double> grid(opt.points);
    for (std::size_t i = 0; i < opt.points; ++i)
      grid[i] = c - h * std::cos(pi * static_cast<double>(i) / static_cast<double>(opt.points - 1));
    grid.front() = left;
    grid.back() = right;
    detail::recover_density(mu, nu, std::move(grid), opt, out);
  }
  return out;
}

/// Points of the lower half-plane used for R-transform identities.
inline std::vector<cplx> lower_half_plane_probes(double scale) {
  std::vector<cplx> z;
  for (double y : {0.05, 0.5, 2.0})
    for (int k = -4; k <= 4; ++k) z.emplace_back(scale * 0.5 * k, -scale * y);
  return z;
}

/// max |r_{mu(alpha,beta,lambda)} - r_{mu(alpha,beta,-lambda)} - r_{nu(1/alpha,lambda)}| over `zs`.
inline double r_additivity_residual(const NaturalParams& p, const std::vector<cplx>& zs) {
  if (!(p.lambda > 0.0)) throw DomainError("r_additivity_residual: lambda must be positive");
  const FgigR sum(NaturalParams{p.alpha, p.beta, p.lambda}), x(NaturalParams{p.alpha, p.beta, -p.lambda});
  const FreePoissonParams y{1.0 / p.alpha, p.lambda};
  double worst = 0.0;
  for (cplx z : zs) worst = std::max(worst, std::abs(sum(z) - x(z) - r_free_poisson(y, z)));
  return worst;
}

}  // namespace fgig

#endif  // FGIG_CONVOLUTION_HPP
