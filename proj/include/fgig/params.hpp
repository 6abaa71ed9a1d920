#ifndef FGIG_PARAMS_HPP
#define FGIG_PARAMS_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fgig/numeric.hpp"

namespace fgig {

/// (alpha, beta, lambda) of the density (1/2pi) sqrt((x-a)(b-x)) (alpha/x + beta/(sqrt(ab) x^2)).
struct NaturalParams {
  double alpha = 1.0;
  double beta = 1.0;
  double lambda = 0.0;
};

/// Support endpoints [a, b] plus lambda.
struct SupportForm {
  double a = 1.0;
  double b = 2.0;
  double lambda = 0.0;
};

/// A = (sqrt b - sqrt a)^2, B = (sqrt a + sqrt b)^2.
struct SpreadForm {
  double A = 1.0;
  double B = 2.0;
  double lambda = 0.0;
};

/// Roots of f(z) = 4 beta (z - delta)^2 (eta - z) and the third root gamma of the
/// cubic factor appearing in the unfactored form of f.
struct SpectralRoots {
  double gamma = 0.0;
  double delta = 0.0;
  double eta = 0.0;
};

struct InvariantCheck {
  std::string name;
  bool pass = false;
  /// Positive when satisfied; its magnitude is the slack in the inequality.
  double margin = 0.0;
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;
  bool valid() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline ValidationReport validate(const NaturalParams& p) {
  ValidationReport r;
  r.checks.push_back({"alpha > 0", p.alpha > 0.0 && std::isfinite(p.alpha), p.alpha});
  r.checks.push_back({"beta > 0", p.beta > 0.0 && std::isfinite(p.beta), p.beta});
  r.checks.push_back({"lambda finite", std::isfinite(p.lambda), std::isfinite(p.lambda) ? 1.0 : -1.0});
  return r;
}

inline ValidationReport validate(const SupportForm& s) {
  ValidationReport r;
  r.checks.push_back({"a > 0", s.a > 0.0, s.a});
  r.checks.push_back({"a < b", s.a < s.b, s.b - s.a});
  double ratio = 0.0;
  if (s.a > 0.0 && s.b > 0.0) {
    const double q = (std::sqrt(s.b) - std::sqrt(s.a)) / (std::sqrt(s.a) + std::sqrt(s.b));
    ratio = q * q;
  }
  const double slack = 1.0 - std::abs(s.lambda) * ratio;
  r.checks.push_back({"|lambda| ((sqrt a - sqrt b)/(sqrt a + sqrt b))^2 < 1",
                      slack > 0.0 && std::isfinite(s.lambda), slack});
  return r;
}

inline ValidationReport validate(const SpreadForm& s) {
  ValidationReport r;
  r.checks.push_back({"A > 0", s.A > 0.0, s.A});
  const double m = std::max(1.0, std::abs(s.lambda));
  r.checks.push_back({"max(1,|lambda|) A < B", m * s.A < s.B && std::isfinite(s.lambda), s.B - m * s.A});
  return r;
}

namespace detail {

template <typename Form>
void require_valid(const Form& form, const char* what) {
  const auto report = validate(form);
  for (const auto& c : report.checks)
    if (!c.pass) throw DomainError(std::string(what) + ": violated " + c.name);
}

}  // namespace detail

/// Closed-form (alpha, beta) for a support [a, b].
inline NaturalParams from_support(const SupportForm& s) {
  detail::require_valid(s, "from_support");
  const double sa = std::sqrt(s.a), sb = std::sqrt(s.b);
  // (sqrt a - sqrt b)^2 without cancellation
  const double diff2 = (s.b - s.a) * (s.b - s.a) / ((sa + sb) * (sa + sb));
  const double ratio = diff2 / ((sa + sb) * (sa + sb));
  return {2.0 / diff2 * (1.0 + s.lambda * ratio), 2.0 * s.a * s.b / diff2 * (1.0 - s.lambda * ratio),
          s.lambda};
}

inline SpreadForm to_spread(const SupportForm& s) {
  detail::require_valid(s, "reparameterize");
  const double sa = std::sqrt(s.a), sb = std::sqrt(s.b);
  const double d = (s.b - s.a) / (sa + sb);
  return {d * d, (sa + sb) * (sa + sb), s.lambda};
}

inline SupportForm to_support(const SpreadForm& s) {
  detail::require_valid(s, "reparameterize");
  const double sA = std::sqrt(s.A), sB = std::sqrt(s.B);
  const double d = 0.5 * (s.B - s.A) / (sA + sB);
  const double e = 0.5 * (sA + sB);
  return {d * d, e * e, s.lambda};
}

inline SpreadForm reparameterize(const SupportForm& s) { return to_spread(s); }
inline SupportForm reparameterize(const SpreadForm& s) { return to_support(s); }

inline NaturalParams from_spread(const SpreadForm& s) {
  detail::require_valid(s, "from_spread");
  const double t = s.A / s.B;
  return {2.0 / s.A * (1.0 + s.lambda * t), (s.B - s.A) * (s.B - s.A) / (8.0 * s.A) * (1.0 - s.lambda * t),
          s.lambda};
}

/// Residuals of the two defining equations for (a, b), each divided by the sum of
/// absolute values of its terms.
inline std::array<double, 2> support_residuals(const NaturalParams& p, const SupportForm& s) {
  const double rab = std::sqrt(s.a * s.b);
  const double t1 = p.alpha * rab, t2 = p.beta * (s.a + s.b) / (2.0 * s.a * s.b);
  const double u1 = p.beta / rab, u2 = p.alpha * (s.a + s.b) / 2.0;
  const double e1 = (1.0 - p.lambda) + t1 - t2;
  const double e2 = (1.0 + p.lambda) + u1 - u2;
  return {std::abs(e1) / (std::abs(1.0 - p.lambda) + t1 + t2),
          std::abs(e2) / (std::abs(1.0 + p.lambda) + u1 + u2)};
}

struct SolveOptions {
  double tolerance = 1e-12;
  int max_iterations = 200;
  /// Warm start in spread coordinates, e.g. from a neighbouring parameter value.
  std::optional<SpreadForm> initial;
  /// Skip Newton and use the one-dimensional bracketing solve directly.
  bool force_bracketing = false;
};

struct SolveDiagnostics {
  int iterations = 0;
  bool used_bracketing = false;
  double residual = 0.0;
};

namespace detail {

// Log-residuals of the (A, B) closed forms for alpha and beta in the variables
// u = log A, v = log(B - m A), m = max(1, |lambda|). Every sum below has
// nonnegative terms, so no cancellation occurs anywhere in the box.
struct SpreadSystem {
  double log_alpha, log_beta, lambda, m;

  std::array<double, 2> residual(double u, double v, std::array<std::array<double, 2>, 2>* jac) const {
    const double A = std::exp(u), E = std::exp(v);
    const double kp = (m + lambda) * A, km = (m - lambda) * A, k1 = (m - 1.0) * A, kb = m * A;
    const double sp = kp + E, sm = km + E, s1 = k1 + E, sb = kb + E;
    const double f1 = std::log(2.0) - u + std::log(sp) - std::log(sb) - log_alpha;
    const double f2 = 2.0 * std::log(s1) - std::log(8.0) - u + std::log(sm) - std::log(sb) - log_beta;
    if (jac) {
      (*jac)[0][0] = -1.0 + kp / sp - kb / sb;
      (*jac)[0][1] = E / sp - E / sb;
      (*jac)[1][0] = 2.0 * k1 / s1 - 1.0 + km / sm - kb / sb;
      (*jac)[1][1] = 2.0 * E / s1 + E / sm - E / sb;
    }
    return {f1, f2};
  }
};

// Spread coordinates kept as (A, E = B - m A) so that B - A = (m - 1) A + E is
// formed without cancellation.
struct SpreadCore {
  double A, E, m, lambda;

  SupportForm support() const {
    const double B = m * A + E;
    const double sA = std::sqrt(A), sB = std::sqrt(B);
    const double d = 0.5 * ((m - 1.0) * A + E) / (sA + sB);
    const double e = 0.5 * (sA + sB);
    return {d * d, e * e, lambda};
  }
};

// Eliminating A through the alpha equation leaves
//   4 alpha beta = (1 - lambda^2 t^2)(1 - t)^2 / t^2,  t = A/B in (0, 1/m),
// whose right side decreases strictly from +inf to 0. Bisect on log w, w = 1 - m t.
inline SpreadCore solve_spread_bracketing(const NaturalParams& p) {
  const double al = std::abs(p.lambda);
  const double m = std::max(1.0, al);
  const double target = std::log(4.0 * p.alpha) + std::log(p.beta);
  auto log_h = [&](double lw) {
    const double w = std::exp(lw);
    const double t = (1.0 - w) / m;
    const double one_minus_lt = (m == al) ? w : 1.0 - al * t;
    const double one_minus_t = (m == 1.0) ? w : 1.0 - t;
    return std::log(one_minus_lt) + std::log1p(al * t) + 2.0 * std::log(one_minus_t) - 2.0 * std::log(t) -
           target;
  };
  const double lw = bisect(log_h, -700.0, std::log1p(-1e-15), 0.0, 400);
  const double w = std::exp(lw);
  const double t = (1.0 - w) / m;
  const double A = 2.0 * (1.0 + p.lambda * t) / p.alpha;
  return {A, A * m * w / (1.0 - w), m, p.lambda};
}

}  // namespace detail

/// Solves the two defining equations for the support [a, b] of mu(alpha, beta, lambda):
/// damped Newton in (log A, log(B - max(1,|lambda|) A)), falling back to a bracketing
/// solve when Newton stalls.
namespace detail {

// Newton steps on the two support equations in extended precision, so that the
// endpoints come out correctly rounded rather than a few ulp off.
inline SupportForm polish_support(const NaturalParams& p, SupportForm s) {
  using L = long double;
  const L al = p.alpha, be = p.beta, l = p.lambda;
  auto eval = [&](L a, L b, L* e, L (*J)[2]) {
    const L r = std::sqrt(a * b);
    e[0] = (1 - l) + al * r - be * (a + b) / (2 * a * b);
    e[1] = (1 + l) + be / r - al * (a + b) / 2;
    if (J) {
      J[0][0] = al * b / (2 * r) + be / (2 * a * a);
      J[0][1] = al * a / (2 * r) + be / (2 * b * b);
      J[1][0] = -be / (2 * a * r) - al / 2;
      J[1][1] = -be / (2 * b * r) - al / 2;
    }
  };
  L a = s.a, b = s.b;
  L e[2], J[2][2];
  eval(a, b, e, J);
  for (int it = 0; it < 3; ++it) {
    const L det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (!(std::abs(det) > 0)) break;
    const L na = a - (J[1][1] * e[0] - J[0][1] * e[1]) / det;
    const L nb = b - (-J[1][0] * e[0] + J[0][0] * e[1]) / det;
    if (!(na > 0 && na < nb)) break;
    L ne[2];
    eval(na, nb, ne, nullptr);
    if (!(std::max(std::abs(ne[0]), std::abs(ne[1])) <= std::max(std::abs(e[0]), std::abs(e[1])))) break;
    a = na;
    b = nb;
    eval(a, b, e, J);
  }
  const SupportForm out{static_cast<double>(a), static_cast<double>(b), s.lambda};
  return out.a > 0.0 && out.a < out.b ? out : s;
}

}  // namespace detail

inline SupportForm solve_support(const NaturalParams& p, const SolveOptions& opt = {},
                                 SolveDiagnostics* diag = nullptr) {
  detail::require_valid(p, "solve_support");
  const double lambda = p.lambda == 0.0 ? 0.0 : p.lambda;  // folds -0 into +0
  const double m = std::max(1.0, std::abs(lambda));
  const NaturalParams q{p.alpha, p.beta, lambda};
  detail::SpreadSystem sys{std::log(p.alpha), std::log(p.beta), lambda, m};
  SolveDiagnostics d;

  double u, v;
  if (opt.initial) {
    u = std::log(opt.initial->A);
    v = std::log(std::max(opt.initial->B - m * opt.initial->A, 1e-300 * opt.initial->B));
  } else {
    const double A0 = 2.0 / p.alpha;
    u = std::log(A0);
    v = std::log(3.0 * m * A0);
  }

  auto norm = [](const std::array<double, 2>& f) { return std::max(std::abs(f[0]), std::abs(f[1])); };
  bool converged = false;
  if (!opt.force_bracketing) {
    std::array<std::array<double, 2>, 2> J{};
    auto F = sys.residual(u, v, &J);
    int rejections = 0;
    for (int it = 0; it < opt.max_iterations && rejections < 20; ++it) {
      d.iterations = it + 1;
      if (norm(F) <= 1e-15) break;
      const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
      if (!std::isfinite(det) || det == 0.0) break;
      const double du = -(J[1][1] * F[0] - J[0][1] * F[1]) / det;
      const double dv = -(-J[1][0] * F[0] + J[0][0] * F[1]) / det;
      double step = 1.0;
      bool accepted = false;
      for (; rejections < 20; step *= 0.5) {
        std::array<std::array<double, 2>, 2> Jn{};
        const auto Fn = sys.residual(u + step * du, v + step * dv, &Jn);
        if (std::isfinite(Fn[0]) && std::isfinite(Fn[1]) && norm(Fn) < norm(F)) {
          u += step * du;
          v += step * dv;
          F = Fn;
          J = Jn;
          accepted = true;
          rejections = 0;
          break;
        }
        ++rejections;
      }
      if (!accepted) break;
    }
    converged = norm(F) <= 0.1 * opt.tolerance;
  }

  detail::SpreadCore core{std::exp(u), std::exp(v), m, lambda};
  SupportForm s = core.support();
  auto res = support_residuals(q, s);
  if (!converged || std::max(res[0], res[1]) > opt.tolerance) {
    d.used_bracketing = true;
    s = detail::solve_spread_bracketing(q).support();
    res = support_residuals(q, s);
  }
  s = detail::polish_support(q, s);
  res = support_residuals(q, s);
  d.residual = std::max(res[0], res[1]);
  if (diag) *diag = d;
  if (!(d.residual <= opt.tolerance)) throw NumericError("solve_support did not reach tolerance", d.residual);
  return s;
}

inline SpreadForm solve_spread(const NaturalParams& p, const SolveOptions& opt = {}) {
  return to_spread(solve_support(p, opt));
}

/// Roots from the spread-form closed expressions.
inline SpectralRoots spectral_roots(const SpreadForm& s) {
  const double A = s.A, B = s.B, l = s.lambda;
  return {2.0 * (l * A * A + A * B - 2.0 * B * B) / (B * (B - A) * (B - A)),
          -2.0 * (B + l * A) / (B * (B - A)), 2.0 * B / (A * (B - l * A))};
}

/// Roots for a solved triple. Uses B - A = 4 sqrt(ab) to avoid cancellation and the
/// exact lambda = 0 values eta = alpha, delta = -sqrt(alpha / (4 beta)).
inline SpectralRoots spectral_roots(const NaturalParams& p, const SupportForm& s) {
  const SpreadForm sp = to_spread(s);
  const double A = sp.A, B = sp.B, l = p.lambda;
  const double gap = 4.0 * std::sqrt(s.a * s.b);
  SpectralRoots r{2.0 * (l * A * A + A * B - 2.0 * B * B) / (B * gap * gap), -2.0 * (B + l * A) / (B * gap),
                  2.0 * B / (A * (B - l * A))};
  if (l == 0.0) {
    r.eta = p.alpha;
    r.delta = -std::sqrt(p.alpha / (4.0 * p.beta));
  }
  return r;
}

inline SpectralRoots spectral_roots(const NaturalParams& p) { return spectral_roots(p, solve_support(p)); }

/// gamma from its (alpha, beta, a, b) expression, independent of the spread form.
inline double gamma_from_support(const NaturalParams& p, const SupportForm& s) {
  const double ab = s.a * s.b, rab = std::sqrt(ab);
  return (p.alpha * p.alpha * ab + p.beta * p.beta / ab -
          2.0 * p.alpha * p.beta * ((s.a + s.b) / rab - 1.0) - (p.lambda - 1.0) * (p.lambda - 1.0)) /
         (4.0 * p.beta);
}

/// Law of X^{-1} when X ~ mu(alpha, beta, lambda).
inline NaturalParams invert_params(const NaturalParams& p) {
  detail::require_valid(p, "invert_params");
  return {p.beta, p.alpha, -p.lambda};
}

/// Everything derived from one parameter triple, solved once.
struct FgigLaw {
  NaturalParams params;
  SupportForm support;
  SpreadForm spread;
  SpectralRoots roots;

  FgigLaw() = default;
  explicit FgigLaw(const NaturalParams& p, const SolveOptions& opt = {})
      : params(p), support(solve_support(p, opt)), spread(to_spread(support)) {
    if (params.lambda == 0.0) params.lambda = 0.0;
    roots = spectral_roots(params, support);
  }

  double alpha() const { return params.alpha; }
  double beta() const { return params.beta; }
  double lambda() const { return params.lambda; }
  double a() const { return support.a; }
  double b() const { return support.b; }
};

/// f(z) = (alpha + (lambda-1) z)^2 - 4 beta z (z - alpha)(z - gamma), gamma from the support form.
template <typename Z>
Z f_polynomial(const NaturalParams& p, const SupportForm& s, Z z) {
  const double g = gamma_from_support(p, s);
  const Z lin = p.alpha + (p.lambda - 1.0) * z;
  return lin * lin - 4.0 * p.beta * z * (z - p.alpha) * (z - g);
}

/// f(z) = 4 beta (z - delta)^2 (eta - z).
template <typename Z>
Z f_factored(double beta, const SpectralRoots& r, Z z) {
  return 4.0 * beta * (z - r.delta) * (z - r.delta) * (r.eta - z);
}

}  // namespace fgig

#endif  // FGIG_PARAMS_HPP
