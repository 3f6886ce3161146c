#ifndef BEXP_TESTS_SUPPORT_HPP_
#define BEXP_TESTS_SUPPORT_HPP_

#include <cmath>
#include <random>
#include <vector>

#include "bexp/bexp.hpp"

namespace bexp::fixtures {

// Uniform point of the simplex, optionally bounded away from zero.
inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n,
                                          double floor = 0.0) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  double total = 0.0;
  for (double& x : v) {
    x = e(rng) + floor;
    total += x;
  }
  for (double& x : v) x /= total;
  // absorb rounding so the masses sum to one within 1e-12
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) s += v[i];
  v[n - 1] = 1.0 - s;
  return v;
}

inline BinaryExperiment random_experiment(std::mt19937_64& rng, std::size_t n,
                                          double floor = 0.05) {
  return BinaryExperiment(random_simplex(rng, n, floor), random_simplex(rng, n, floor));
}

inline std::size_t random_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double rel_tol(double tol, double reference) {
  return tol * (1.0 + std::abs(reference));
}

}  // namespace bexp::fixtures

#endif  // BEXP_TESTS_SUPPORT_HPP_
