#ifndef BEXP_DIVERGENCES_HPP_
#define BEXP_DIVERGENCES_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bexp/convex.hpp"
#include "bexp/experiments.hpp"
#include "bexp/numeric.hpp"
#include "bexp/weight.hpp"

namespace bexp {

/*
 * sum_i q_i f(p_i / q_i) - f(1), with boundary atoms handled by the
 * perspective and infinite terms detected before summation.
 */
inline double f_divergence_direct(const BinaryExperiment& exp, const ConvexFunction& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double p = exp.p(i), q = exp.q(i);
    if (q == 0.0 && p > 0.0 && std::isinf(f.slope_at_infinity)) return kInf;
    if (p == 0.0 && q > 0.0 && std::isinf(f.limit_at_zero)) return kInf;
  }
  for (std::size_t i = 0; i < exp.size(); ++i) {
    total += perspective_eval(f, exp.p(i), exp.q(i));
    if (total > 1e15) return kInf;
  }
  return std::max(0.0, total - f.value_at_one());
}

// Total variation sum_i |p_i - q_i|.
inline double variational(const BinaryExperiment& exp) {
  double v = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) v += std::abs(exp.p(i) - exp.q(i));
  return v;
}

/*
 * Weight of f: pi -> f''((1 - pi) / pi) / pi^3. Kinks of f become atoms.
 */
inline WeightFunction gamma_from_f(const ConvexFunction& f) {
  RealFn second;
  if (f.deriv2) {
    second = f.deriv2;
  } else if (f.deriv1) {
    second = [f](double s) { return first_derivative(f.deriv1, s, 1e-3 * s); };
  } else {
    second = [f](double s) { return second_derivative(f.eval, s, 1e-2 * s); };
  }
  auto smooth = [second](double pi) {
    const double s = (1.0 - pi) / pi;
    const double v = second(s) / (pi * pi * pi);
    if (std::isnan(v)) {
      // overflow in the generator far out in its tails
      if (pi < 1e-9 || pi > 1.0 - 1e-9) return 0.0;
      throw NumericError("second derivative failed at s = " + std::to_string(s));
    }
    return std::max(0.0, v);
  };
  std::vector<Atom> atoms;
  std::vector<double> cuts;
  for (const Kink& k : f.kinks) {
    const double loc = 1.0 / (1.0 + k.location);
    atoms.push_back({loc, k.slope_jump / loc});
    cuts.push_back(loc);
  }
  bool smooth_part = true;
  if (f.deriv2) {
    // a generator that is piecewise linear carries no density
    smooth_part = false;
    for (double pi : {0.1, 0.3, 0.5, 0.7, 0.9, 0.37, 0.61}) {
      if (f.deriv2((1.0 - pi) / pi) != 0.0) smooth_part = true;
    }
  }
  if (!smooth_part) return WeightFunction::atoms_only(std::move(atoms));
  return WeightFunction(smooth, std::move(atoms), std::move(cuts));
}

/*
 * Rebuilds a generator from its weight. Anchored so that f(1) = f'(1) = 0:
 *   f(s) = int_1^s (s - t) k(t) dt,  k(t) = gamma(1/(t+1)) / (t+1)^3,
 * plus a hinge for every atom.
 */
inline ConvexFunction f_from_gamma(const WeightFunction& gamma) {
  auto w = std::make_shared<WeightFunction>(gamma);
  auto kernel = [w](double t) {
    const double u = 1.0 / (t + 1.0);
    return w->smooth(u) * u * u * u;
  };
  std::vector<double> cuts;
  for (double b : gamma.breakpoints()) cuts.push_back((1.0 - b) / b);
  std::sort(cuts.begin(), cuts.end());
  struct Hinge {
    double at;
    double jump;
  };
  std::vector<Hinge> hinges;
  for (const Atom& a : gamma.atoms()) {
    hinges.push_back({(1.0 - a.location) / a.location, a.mass * a.location});
  }
  const bool smooth = gamma.has_smooth();

  ConvexFunction f;
  f.eval = [=](double s) {
    double v = 0.0;
    if (smooth && s != 1.0) {
      v = integrate_pieces([&](double t) { return (s - t) * kernel(t); }, 1.0, s, cuts);
    }
    for (const Hinge& h : hinges) {
      v += h.jump * (positive_part(s - h.at) - positive_part(1.0 - h.at));
    }
    return v;
  };
  f.deriv1 = [=](double s) {
    double v = smooth ? integrate_pieces(kernel, 1.0, s, cuts) : 0.0;
    for (const Hinge& h : hinges) v += h.jump * step(s - h.at);
    return v;
  };
  for (const Hinge& h : hinges) f.kinks.push_back({h.at, h.jump});

  // f(0) = int_0^1 t k(t) dt and the slope at infinity = int_1^inf k(t) dt;
  // in the weight variable these are int_{1/2}^1 (1-u) gamma(u) du and
  // int_0^{1/2} u gamma(u) du.
  double at_zero = 0.0, slope = 0.0;
  if (smooth) {
    RealFn g0 = [w](double u) { return (1.0 - u) * w->smooth(u); };
    RealFn g1 = [w](double u) { return u * w->smooth(u); };
    const auto& bp = gamma.breakpoints();
    std::vector<double> right, left;
    for (double b : bp) (b > 0.5 ? right : left).push_back(b);
    if (integrable_near(g0, 1.0, -1)) {
      double m = right.empty() ? 0.75 : std::max(0.75, right.back());
      at_zero = integrate_pieces(g0, 0.5, m, right) + integrate_singular(g0, m, 1.0);
    } else {
      at_zero = kInf;
    }
    if (integrable_near(g1, 0.0, 1)) {
      double m = left.empty() ? 0.25 : std::min(0.25, left.front());
      slope = integrate_singular(g1, 0.0, m) + integrate_pieces(g1, m, 0.5, left);
    } else {
      slope = kInf;
    }
  }
  for (const Hinge& h : hinges) {
    at_zero -= h.jump * positive_part(1.0 - h.at);
    slope += h.jump;
  }
  f.limit_at_zero = at_zero;
  f.slope_at_infinity = slope;
  return f;
}

namespace details {

// min(pi, 1 - pi) - L(pi) as a sum of positive parts: exact zeros on the flat ends
inline double delta01(const BinaryExperiment& exp, double pi) {
  double r = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double gap = pi * exp.p(i) - (1.0 - pi) * exp.q(i);
    r += pi < 0.5 ? std::max(0.0, gap) : std::max(0.0, -gap);
  }
  return r;
}

}  // namespace details

/*
 * int_0^1 Delta(pi) gamma(pi) dpi + atom terms, where Delta is the
 * piecewise-linear 0-1 statistical information of the experiment.
 */
inline double divergence_via_weight(const BinaryExperiment& exp, const WeightFunction& gamma) {
  double total = 0.0;
  for (const Atom& a : gamma.atoms()) total += a.mass * details::delta01(exp, a.location);
  if (!gamma.has_smooth()) return total;

  std::vector<double> cuts{0.0, 0.5, 1.0};
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double s = exp.p(i) + exp.q(i);
    if (s > 0.0) cuts.push_back(exp.q(i) / s);
  }
  for (double b : gamma.breakpoints()) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const RealFn& g = gamma.density();
  auto integrand = [&](double pi) { return details::delta01(exp, pi) * g(pi); };
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    const double mid = 0.5 * (a + b);
    if (details::delta01(exp, mid) == 0.0 && details::delta01(exp, a) == 0.0 &&
        details::delta01(exp, b) == 0.0) {
      continue;
    }
    double piece;
    if (a == 0.0 || b == 1.0) {
      const double e = a == 0.0 ? 0.0 : 1.0;
      const int side = a == 0.0 ? 1 : -1;
      if (!integrable_near(integrand, e, side)) return kInf;
      piece = integrate_singular(integrand, a, b, 1e-12);
    } else {
      piece = integrate(integrand, a, b, 1e-12);
    }
    total += piece;
    if (total > 1e15) return kInf;
  }
  return total;
}

inline bool is_symmetric_weight(const WeightFunction& gamma) {
  for (int k = 1; k <= 99; ++k) {
    const double pi = k / 100.0;
    const double a = gamma.smooth(pi), b = gamma.smooth(1.0 - pi);
    if (std::isinf(a) || std::isinf(b)) {
      if (a != b) return false;
      continue;
    }
    if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(a))) return false;
  }
  const auto& atoms = gamma.atoms();
  for (const Atom& a : atoms) {
    bool mirrored = false;
    for (const Atom& b : atoms) {
      if (std::abs(a.location + b.location - 1.0) <= 1e-12 &&
          std::abs(a.mass - b.mass) <= 1e-12 * (1.0 + a.mass)) {
        mirrored = true;
      }
    }
    if (!mirrored) return false;
  }
  return true;
}

// Generator of the 0-1 statistical information at prior pi.
inline ConvexFunction primitive_f_pi(double prior) {
  details::check_prior(prior);
  const double lo = std::min(prior, 1.0 - prior);
  ConvexFunction f;
  f.eval = [prior, lo](double t) { return lo - std::min(1.0 - prior, prior * t); };
  f.deriv1 = [prior](double t) { return prior * t < 1.0 - prior ? -prior : 0.0; };
  f.deriv2 = [](double) { return 0.0; };
  f.limit_at_zero = lo;
  f.slope_at_infinity = 0.0;
  f.kinks = {{(1.0 - prior) / prior, prior}};
  return f;
}

/*
 * A named divergence: the generator when it has a closed form, and the
 * weight, recomputed from the generator whenever the generator is known.
 */
struct DivergenceSpec {
  std::string name;
  std::optional<ConvexFunction> f;
  WeightFunction gamma;
  std::map<std::string, double> params;
};

namespace generators {

inline ConvexFunction kl() {
  ConvexFunction f;
  f.eval = [](double t) { return xlogx(t); };
  f.deriv1 = [](double t) { return std::log(t) + 1.0; };
  f.deriv2 = [](double t) { return 1.0 / t; };
  f.deriv1_inverse = [](double y) { return std::exp(y - 1.0); };
  f.limit_at_zero = 0.0;
  f.slope_at_infinity = kInf;
  return f;
}

inline ConvexFunction variational() {
  ConvexFunction f;
  f.eval = [](double t) { return std::abs(t - 1.0); };
  f.deriv1 = [](double t) { return t < 1.0 ? -1.0 : 1.0; };
  f.deriv2 = [](double) { return 0.0; };
  f.limit_at_zero = 1.0;
  f.slope_at_infinity = 1.0;
  f.kinks = {{1.0, 2.0}};
  return f;
}

inline ConvexFunction triangular() {
  ConvexFunction f;
  f.eval = [](double t) { return (t - 1.0) * (t - 1.0) / (t + 1.0); };
  f.deriv1 = [](double t) { return 1.0 - 4.0 / ((t + 1.0) * (t + 1.0)); };
  f.deriv2 = [](double t) { return 8.0 / ((t + 1.0) * (t + 1.0) * (t + 1.0)); };
  f.deriv1_inverse = [](double y) {
    if (y <= -3.0) return 0.0;
    return 2.0 / std::sqrt(1.0 - y) - 1.0;
  };
  f.limit_at_zero = 1.0;
  f.slope_at_infinity = 1.0;
  return f;
}

inline ConvexFunction jensen_shannon() {
  ConvexFunction f;
  f.eval = [](double t) {
    return 0.5 * xlogx(t) - 0.5 * (t + 1.0) * std::log(t + 1.0) + std::log(2.0);
  };
  f.deriv1 = [](double t) { return 0.5 * std::log(t / (t + 1.0)); };
  f.deriv2 = [](double t) { return 0.5 / (t * (t + 1.0)); };
  f.deriv1_inverse = [](double y) {
    if (y >= 0.0) return kInf;
    const double r = std::exp(2.0 * y);
    return r / (1.0 - r);
  };
  f.limit_at_zero = std::log(2.0);
  f.slope_at_infinity = 0.0;
  return f;
}

inline ConvexFunction agm() {
  ConvexFunction f;
  f.eval = [](double t) {
    return 0.5 * (t + 1.0) * std::log((t + 1.0) / (2.0 * std::sqrt(t)));
  };
  f.deriv1 = [](double t) {
    return 0.5 * std::log((t + 1.0) / (2.0 * std::sqrt(t))) + 0.5 - (t + 1.0) / (4.0 * t);
  };
  f.deriv2 = [](double t) { return (t * t + 1.0) / (4.0 * t * t * (t + 1.0)); };
  f.limit_at_zero = kInf;
  f.slope_at_infinity = kInf;
  return f;
}

inline ConvexFunction jeffreys() {
  ConvexFunction f;
  f.eval = [](double t) { return (t - 1.0) * std::log(t); };
  f.deriv1 = [](double t) { return std::log(t) + 1.0 - 1.0 / t; };
  f.deriv2 = [](double t) { return 1.0 / t + 1.0 / (t * t); };
  f.limit_at_zero = kInf;
  f.slope_at_infinity = kInf;
  return f;
}

inline ConvexFunction hellinger() {
  ConvexFunction f;
  f.eval = [](double t) {
    const double r = std::sqrt(t) - 1.0;
    return r * r;
  };
  f.deriv1 = [](double t) { return 1.0 - 1.0 / std::sqrt(t); };
  f.deriv2 = [](double t) { return 0.5 / (t * std::sqrt(t)); };
  f.deriv1_inverse = [](double y) {
    if (y >= 1.0) return kInf;
    return 1.0 / ((1.0 - y) * (1.0 - y));
  };
  f.limit_at_zero = 1.0;
  f.slope_at_infinity = 1.0;
  return f;
}

inline ConvexFunction chi2() {
  ConvexFunction f;
  f.eval = [](double t) { return (t - 1.0) * (t - 1.0); };
  f.deriv1 = [](double t) { return 2.0 * (t - 1.0); };
  f.deriv2 = [](double) { return 2.0; };
  f.deriv1_inverse = [](double y) { return 1.0 + 0.5 * y; };
  f.limit_at_zero = 1.0;
  f.slope_at_infinity = kInf;
  return f;
}

inline ConvexFunction sym_chi2() {
  ConvexFunction f;
  f.eval = [](double t) { return (t - 1.0) * (t - 1.0) * (t + 1.0) / t; };
  f.deriv1 = [](double t) { return 2.0 * t - 1.0 - 1.0 / (t * t); };
  f.deriv2 = [](double t) { return 2.0 + 2.0 / (t * t * t); };
  f.limit_at_zero = kInf;
  f.slope_at_infinity = kInf;
  return f;
}

}  // namespace generators

inline DivergenceSpec builtin(const std::string& name,
                              const std::map<std::string, double>& params = {}) {
  DivergenceSpec spec;
  spec.name = name;
  spec.params = params;
  std::optional<ConvexFunction> f;
  if (name == "kl") f = generators::kl();
  else if (name == "variational") f = generators::variational();
  else if (name == "triangular") f = generators::triangular();
  else if (name == "jensen_shannon") f = generators::jensen_shannon();
  else if (name == "agm") f = generators::agm();
  else if (name == "jeffreys") f = generators::jeffreys();
  else if (name == "hellinger") f = generators::hellinger();
  else if (name == "chi2") f = generators::chi2();
  else if (name == "sym_chi2") f = generators::sym_chi2();

  if (f) {
    spec.f = f;
    spec.gamma = gamma_from_f(*f);
    return spec;
  }
  if (name == "uninformative") {
    spec.gamma = WeightFunction([](double pi) { return 1.0 / std::min(pi, 1.0 - pi); }, {},
                                {0.5});
    return spec;
  }
  if (name == "kl_eps") {
    auto it = params.find("eps");
    const double eps = it == params.end() ? 0.01 : it->second;
    if (!(eps > 0.0 && eps < 0.5)) throw ArgumentError("kl_eps: eps must lie in (0, 1/2)");
    spec.params["eps"] = eps;
    spec.gamma = WeightFunction(
        [eps](double pi) {
          if (pi < eps || pi > 1.0 - eps) return 0.0;
          return 1.0 / (pi * pi * (1.0 - pi));
        },
        {}, {eps, 1.0 - eps});
    return spec;
  }
  throw ArgumentError("unknown divergence '" + name + "'");
}

inline const std::vector<std::string>& builtin_divergence_names() {
  static const std::vector<std::string> names{
      "variational", "triangular", "jensen_shannon", "agm", "uninformative", "jeffreys",
      "hellinger",   "chi2",       "sym_chi2",       "kl",  "kl_eps"};
  return names;
}

}  // namespace bexp

#endif  // BEXP_DIVERGENCES_HPP_
