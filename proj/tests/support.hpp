#ifndef FGIG_TEST_SUPPORT_HPP
#define FGIG_TEST_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "fgig/params.hpp"

namespace fgig::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

/// Log-uniform alpha, beta and uniform lambda.
inline NaturalParams random_natural(double lambda_lo = -5.0, double lambda_hi = 5.0) {
  return {std::exp(uniform(std::log(0.2), std::log(5.0))), std::exp(uniform(std::log(0.2), std::log(10.0))),
          uniform(lambda_lo, lambda_hi)};
}

inline std::vector<NaturalParams> random_naturals(std::size_t n, double lambda_lo = -5.0, double lambda_hi = 5.0) {
  std::vector<NaturalParams> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_natural(lambda_lo, lambda_hi));
  return out;
}

/// Valid (a, b, lambda): resampled until |lambda| ((sqrt a - sqrt b)/(sqrt a + sqrt b))^2 < 1.
inline SupportForm random_support() {
  for (;;) {
    const double a = std::exp(uniform(std::log(0.05), std::log(5.0)));
    const double b = a * (1.0 + std::exp(uniform(std::log(0.05), std::log(20.0))));
    const double lambda = uniform(-5.0, 5.0);
    const SupportForm s{a, b, lambda};
    if (validate(s).valid()) return s;
  }
}

}  // namespace fgig::testing

#endif  // FGIG_TEST_SUPPORT_HPP
