#ifndef FGIG_NUMERIC_HPP
#define FGIG_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace fgig {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Raised when an input violates a documented precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an iterative or quadrature routine fails to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Evaluation exactly at a non-removable singular point of an analytic function.
class SingularPointError : public DomainError {
 public:
  SingularPointError(const std::string& what, cplx location, cplx residue)
      : DomainError(what), location_(location), residue_(residue) {}
  cplx location() const noexcept { return location_; }
  cplx residue() const noexcept { return residue_; }

 private:
  cplx location_;
  cplx residue_;
};

inline double relative_difference(double x, double y) {
  const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
  return std::abs(x - y) / scale;
}

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline QuadratureRule gauss_legendre(std::size_t n) {
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

inline const QuadratureRule& gauss_legendre_16() {
  static const QuadratureRule rule = gauss_legendre(16);
  return rule;
}

/// Fixed-rule integral of f over [lo, hi].
template <typename T, typename F>
T integrate_fixed(F&& f, double lo, double hi, const QuadratureRule& rule) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  T acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

namespace detail {

template <typename T, typename F>
T adaptive_step(F& f, double lo, double hi, T whole, double tol, double noise, int depth,
                std::vector<std::pair<double, double>>* panels) {
  const auto& rule = gauss_legendre_16();
  const double mid = 0.5 * (lo + hi);
  const T left = integrate_fixed<T>(f, lo, mid, rule);
  const T right = integrate_fixed<T>(f, mid, hi, rule);
  // the rounding floor stops refinement once the panel sums agree to working precision
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
  // a non-finite panel cannot be refined away; return it so callers can detect divergence
  if (depth <= 0 || !std::isfinite(std::abs(left + right)) ||
      std::abs(left + right - whole) <= std::max({tol, floor, noise})) {
    if (panels) {
      panels->emplace_back(lo, mid);
      panels->emplace_back(mid, hi);
    }
    return left + right;
  }
  return adaptive_step<T>(f, lo, mid, left, 0.5 * tol, noise, depth - 1, panels) +
         adaptive_step<T>(f, mid, hi, right, 0.5 * tol, noise, depth - 1, panels);
}

}  // namespace detail

/// Adaptive bisection with a 16-point Gauss-Legendre rule; real or complex integrands.
/// Optionally records the accepted panels (left to right).
template <typename F>
auto integrate_adaptive(F&& f, double lo, double hi, double abs_tol = 1e-14, int max_depth = 40,
                        std::vector<std::pair<double, double>>* panels = nullptr) {
  using T = std::decay_t<decltype(f(lo))>;
  if (hi <= lo) return T{};
  const T whole = integrate_fixed<T>(f, lo, hi, gauss_legendre_16());
  // panels whose disagreement is below the rounding level of the whole integral are final
  const double noise = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(whole);
  return detail::adaptive_step<T>(f, lo, hi, whole, abs_tol, noise, max_depth, panels);
}

/// Polynomial (Neville) extrapolation of samples y(h_i) to h = 0.
inline double neville_at_zero(std::span<const double> h, std::span<const double> y) {
  std::vector<double> p(y.begin(), y.end());
  const std::size_t n = p.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
  return p[0];
}

/// Bisection for a sign change of f on [lo, hi]; returns the midpoint of the final bracket.
template <typename F>
double bisect(F&& f, double lo, double hi, double x_tol = 0.0, int max_iter = 200) {
  double flo = f(lo);
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || (hi - lo) <= x_tol) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// `count` points evenly spaced on [lo, hi].
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  out.back() = hi;
  return out;
}

/// Runs fn(i) for i in [0, n) over `threads` workers using a static partition.
/// Results written by index are independent of the thread count.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([begin, end, t, &fn, &errors] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace fgig

#endif  // FGIG_NUMERIC_HPP
