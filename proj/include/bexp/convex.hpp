#ifndef BEXP_CONVEX_HPP_
#define BEXP_CONVEX_HPP_

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bexp/numeric.hpp"

namespace bexp {

// A jump of `slope_jump` in the first derivative at `location`.
struct Kink {
  double location;
  double slope_jump;
};

/*
 * A closed convex function on an interval of the half line. Divergence
 * generators live on [0, inf); f(0) and the asymptotic slope are stored
 * separately so boundary cases never depend on evaluating near a pole.
 */
struct ConvexFunction {
  RealFn eval;
  RealFn deriv1;          // optional
  RealFn deriv2;          // optional, smooth part only
  RealFn deriv1_inverse;  // optional; <= 0 means the sup sits at s = 0
  double lower = 0.0;
  double upper = kInf;
  double limit_at_zero = 0.0;
  double slope_at_infinity = kInf;
  std::vector<Kink> kinks;

  double operator()(double s) const {
    if (s == 0.0 && lower == 0.0) return limit_at_zero;
    if (std::isinf(s)) return kInf;
    return eval(s);
  }

  double value_at_one() const { return eval(1.0); }

  bool has_deriv1() const { return static_cast<bool>(deriv1); }
  bool has_deriv2() const { return static_cast<bool>(deriv2); }
};

namespace details {

// f(1e-8) with a first order correction from f(2e-8).
inline double probe_limit_at_zero(const RealFn& f) {
  const double v1 = f(1e-8), v2 = f(2e-8);
  if (!std::isfinite(v1) || v1 > 1e8) return kInf;
  return 2.0 * v1 - v2;
}

/*
 * f(s)/s at s = 1e3, 1e6 and 1e9. Growth that does not slow down between
 * the two increments (logarithmic or faster) is reported as infinite.
 */
inline double probe_slope_at_infinity(const RealFn& f) {
  const double s3 = f(1e3) / 1e3;
  const double s6 = f(1e6) / 1e6;
  const double s9 = f(1e9) / 1e9;
  if (!std::isfinite(s6) || !std::isfinite(s9)) return kInf;
  const double d1 = s6 - s3, d2 = s9 - s6;
  if (d2 > 1e-6 * (1.0 + std::abs(s9)) && d2 >= 0.5 * d1) return kInf;
  return s9;
}

}  // namespace details

// Wraps a user callable, probing the boundary behaviour numerically.
inline ConvexFunction make_convex(RealFn eval, RealFn deriv1 = {},
                                  RealFn deriv2 = {}) {
  ConvexFunction f;
  f.limit_at_zero = details::probe_limit_at_zero(eval);
  f.slope_at_infinity = details::probe_slope_at_infinity(eval);
  f.eval = std::move(eval);
  f.deriv1 = std::move(deriv1);
  f.deriv2 = std::move(deriv2);
  return f;
}

// f(s) + a*s + b, with derivatives and limits carried along.
inline ConvexFunction add_affine(const ConvexFunction& f, double a, double b) {
  ConvexFunction g = f;
  g.eval = [f, a, b](double s) { return f.eval(s) + a * s + b; };
  if (f.deriv1) g.deriv1 = [f, a](double s) { return f.deriv1(s) + a; };
  if (f.deriv1_inverse) {
    g.deriv1_inverse = [f, a](double y) { return f.deriv1_inverse(y - a); };
  }
  g.limit_at_zero = f.limit_at_zero + b;
  g.slope_at_infinity = f.slope_at_infinity + a;
  return g;
}

// Shifts f so that f(1) = 0.
inline ConvexFunction normalized_at_one(const ConvexFunction& f) {
  return add_affine(f, 0.0, -f.value_at_one());
}

/*
 * tau * f(s / tau) extended to the boundary of the quadrant.
 */
inline double perspective_eval(const ConvexFunction& f, double s, double tau) {
  if (s < 0.0 || tau < 0.0 || std::isnan(s) || std::isnan(tau)) {
    throw DomainError("perspective_eval: arguments must be nonnegative");
  }
  if (tau == 0.0) return mul0inf(s, f.slope_at_infinity);
  if (s == 0.0) return mul0inf(tau, f.limit_at_zero);
  return tau * f(s / tau);
}

// tau -> tau f(1/tau); swaps the arguments of the divergence.
inline ConvexFunction csiszar_dual(const ConvexFunction& f) {
  ConvexFunction d;
  d.eval = [f](double t) { return t * f(1.0 / t); };
  if (f.deriv1) {
    d.deriv1 = [f](double t) { return f(1.0 / t) - f.deriv1(1.0 / t) / t; };
  }
  if (f.deriv2) {
    d.deriv2 = [f](double t) { return f.deriv2(1.0 / t) / (t * t * t); };
  }
  d.limit_at_zero = f.slope_at_infinity;
  d.slope_at_infinity = f.limit_at_zero;
  for (const auto& k : f.kinks) {
    d.kinks.push_back({1.0 / k.location, k.slope_jump * k.location});
  }
  return d;
}

/*
 * sup_{s >= 0} s*y - f(s).
 */
inline double lf_conjugate_eval(const ConvexFunction& f, double y) {
  if (std::isnan(y)) throw DomainError("lf_conjugate_eval: NaN argument");
  if (y > f.slope_at_infinity) return kInf;
  const double at_zero = -f.limit_at_zero;
  if (f.deriv1_inverse) {
    const double s = f.deriv1_inverse(y);
    if (!(s > 0.0)) return at_zero;
    if (std::isfinite(s)) return std::max(at_zero, s * y - f(s));
  }
  auto neg = [&](double u) {
    const double s = std::exp(u);
    return -(s * y - f(s));
  };
  double lo = std::log(1e-8), hi = std::log(1e8);
  Extremum r = golden_min(neg, lo, hi, 1e-12);
  // expand the bracket while the optimum sits on its upper edge
  for (int i = 0; i < 4 && r.x >= hi - 1e-6; ++i) {
    lo = hi - 1.0;
    hi += std::log(1e4);
    r = golden_min(neg, lo, hi, 1e-12);
  }
  const double value = -r.value;
  if (r.x >= hi - 1e-6 && y == f.slope_at_infinity) {
    // the supremum is approached at infinity
    return std::max(at_zero, value);
  }
  if (r.x >= hi - 1e-6 || value > 1e15) return kInf;
  return std::max(at_zero, value);
}

/*
 * sum_i p_i f(v_i) - f(sum_i p_i v_i).
 */
inline double jensen_gap(const ConvexFunction& f, const std::vector<double>& values,
                         const std::vector<double>& probs) {
  if (values.size() != probs.size()) {
    throw ArgumentError("jensen_gap: values and probabilities differ in length");
  }
  if (values.empty()) throw ArgumentError("jensen_gap: empty input");
  double total = 0.0, mean = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (probs[i] < 0.0) throw DomainError("jensen_gap: negative probability");
    total += probs[i];
    mean += probs[i] * values[i];
    acc += mul0inf(probs[i], f(values[i]));
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("jensen_gap: probabilities must sum to one");
  }
  const double at_mean = f(mean);
  if (std::isinf(acc) && std::isinf(at_mean)) return 0.0;
  return acc - at_mean;
}

/*
 * Extended infimal convolution: inf_{x > 0} f(x) + tau g(x / tau).
 */
inline double inf_convolve(const ConvexFunction& f, const ConvexFunction& g,
                           double tau) {
  if (!(tau > 0.0)) throw DomainError("inf_convolve: tau must be positive");
  auto objective = [&](double u) {
    const double x = std::exp(u);
    return f(x) + tau * g(x / tau);
  };
  double lo = std::log(1e-8), hi = std::log(1e8);
  Extremum r = golden_min(objective, lo, hi, 1e-13);
  for (int i = 0; i < 4 && (r.x <= lo + 1e-6 || r.x >= hi - 1e-6); ++i) {
    if (r.x <= lo + 1e-6) {
      hi = lo + 1.0;
      lo -= std::log(1e4);
    } else {
      lo = hi - 1.0;
      hi += std::log(1e4);
    }
    r = golden_min(objective, lo, hi, 1e-13);
  }
  double best = r.value;
  const double at_zero = f.limit_at_zero + mul0inf(tau, g.limit_at_zero);
  best = std::min(best, at_zero);
  if (r.x >= hi - 1e-6 && f.slope_at_infinity + g.slope_at_infinity < 0.0) {
    throw DivergenceError("inf_convolve: objective unbounded below");
  }
  if (!std::isfinite(best) && best < 0.0) {
    throw DivergenceError("inf_convolve: objective unbounded below");
  }
  return best;
}

// The infimal convolution as a function of tau.
inline ConvexFunction inf_convolution(const ConvexFunction& f,
                                      const ConvexFunction& g) {
  ConvexFunction h;
  h.eval = [f, g](double tau) { return inf_convolve(f, g, tau); };
  h.limit_at_zero = details::probe_limit_at_zero(h.eval);
  h.slope_at_infinity = details::probe_slope_at_infinity(h.eval);
  return h;
}

}  // namespace bexp

#endif  // BEXP_CONVEX_HPP_
