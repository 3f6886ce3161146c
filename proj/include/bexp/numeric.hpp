#ifndef BEXP_NUMERIC_HPP_
#define BEXP_NUMERIC_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace bexp {

/*
 * Extended reals are plain doubles: +infinity is the IEEE value and NaN is
 * never returned from a public function.
 */
inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: maps to CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ArgumentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InfeasibleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// A supremum or infimum that runs off to infinity.
class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

using RealFn = std::function<double(double)>;

// Product with the 0 * inf = 0 convention.
inline double mul0inf(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

inline double step(double x) { return x >= 0.0 ? 1.0 : 0.0; }

inline double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

struct Extremum {
  double x;
  double value;
};

namespace details {

inline constexpr double kGolden = 0.6180339887498949;

}  // namespace details

// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
Extremum golden_min(F&& f, double lo, double hi, double tol = 1e-12,
                    int max_iter = 300) {
  double a = lo, b = hi;
  double x1 = b - details::kGolden * (b - a);
  double x2 = a + details::kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter; ++it) {
    if (b - a <= tol * (1.0 + std::abs(a) + std::abs(b))) break;
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - details::kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + details::kGolden * (b - a);
      f2 = f(x2);
    }
  }
  Extremum best = f1 <= f2 ? Extremum{x1, f1} : Extremum{x2, f2};
  const double fa = f(lo), fb = f(hi);
  if (fa < best.value) best = {lo, fa};
  if (fb < best.value) best = {hi, fb};
  return best;
}

template <typename F>
Extremum golden_max(F&& f, double lo, double hi, double tol = 1e-12,
                    int max_iter = 300) {
  auto r = golden_min([&](double x) { return -f(x); }, lo, hi, tol, max_iter);
  return {r.x, -r.value};
}

/*
 * Scan `count` equally spaced points, then refine by golden section between
 * the neighbours of the best one. Suitable for piecewise unimodal objectives.
 */
template <typename F>
Extremum scan_golden_min(F&& f, double lo, double hi, int count = 256,
                         double tol = 1e-13) {
  double best_x = lo, best_v = kInf;
  const double h = (hi - lo) / (count - 1);
  int best_k = 0;
  for (int k = 0; k < count; ++k) {
    const double x = k + 1 == count ? hi : lo + k * h;
    const double v = f(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
      best_k = k;
    }
  }
  if (!std::isfinite(best_v)) return {best_x, best_v};
  const double a = std::max(lo, lo + (best_k - 1) * h);
  const double b = std::min(hi, lo + (best_k + 1) * h);
  auto r = golden_min(f, a, b, tol);
  return r.value < best_v ? r : Extremum{best_x, best_v};
}

// Root of an increasing function by bisection; returns lo or hi when the
// target lies outside [f(lo), f(hi)].
template <typename F>
double bisect_increasing(F&& f, double target, double lo, double hi,
                         int iters = 200) {
  if (f(lo) >= target) return lo;
  if (f(hi) <= target) return hi;
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/*
 * Adaptive Gauss-Kronrod over a finite interval on which f is bounded.
 */
template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, tol);
  // a few ulps wide: adaptive refinement cannot make progress
  if (b - a <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))) {
    return (b - a) * f(0.5 * (a + b));
  }
  // the Kronrod error estimate bottoms out near eps |f| whatever the width,
  // so a relative tolerance below eps / (b - a) is unreachable
  const double reachable = 16.0 * std::numeric_limits<double>::epsilon() / (b - a);
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 18, std::max(tol, reachable), &err);
  if (!std::isfinite(v)) {
    throw NumericError("quadrature produced a non-finite value on [" +
                       std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return v;
}

/*
 * Double-exponential quadrature for integrands with integrable endpoint
 * singularities. Integrability must be checked before calling.
 */
template <typename F>
double integrate_singular(F&& f, double a, double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  if (a > b) return -integrate_singular(f, b, a, tol);
  if (b - a <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))) {
    const double mid = f(0.5 * (a + b));
    return std::isfinite(mid) ? (b - a) * mid : 0.0;
  }
  static thread_local boost::math::quadrature::tanh_sinh<double> engine(12);
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  auto guarded = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;
  };
  double v = 0.0;
  try {
    v = engine.integrate(guarded, a, b, tol, &err, &l1, &levels);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    // overflowing partial sums
    v = kInf;
  }
  if (!std::isfinite(v)) {
    throw NumericError("endpoint quadrature failed on [" + std::to_string(a) +
                       ", " + std::to_string(b) + "]");
  }
  return v;
}

/*
 * Heuristic integrability of g near an endpoint: g(e + s*t) is sampled at
 * t = 1e-6 and 1e-8 and the local power law exponent is estimated.
 * `side` is +1 for the left endpoint e and -1 for the right endpoint e.
 */
inline bool integrable_near(const RealFn& g, double e, int side) {
  const double t1 = 1e-6, t2 = 1e-8;
  const double g1 = std::abs(g(e + side * t1));
  const double g2 = std::abs(g(e + side * t2));
  if (!std::isfinite(g1) || !std::isfinite(g2)) return false;
  if (g2 == 0.0) return true;
  if (g1 == 0.0) return false;
  const double ratio = (t2 * g2) / (t1 * g1);
  return ratio < 0.9;
}

// Second derivative by Richardson-extrapolated central differences.
template <typename F>
double second_derivative(F&& f, double x, double h) {
  auto d = [&](double s) { return (f(x + s) - 2.0 * f(x) + f(x - s)) / (s * s); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

// First derivative by Richardson-extrapolated central differences.
template <typename F>
double first_derivative(F&& f, double x, double h) {
  auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

// Step size for differences on (0,1) that keeps stencils inside the interval.
inline double unit_interval_step(double x, double base = 1e-3) {
  return std::min({base, 0.25 * x, 0.25 * (1.0 - x)});
}

}  // namespace bexp

#endif  // BEXP_NUMERIC_HPP_
