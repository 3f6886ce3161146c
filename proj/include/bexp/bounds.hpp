#ifndef BEXP_BOUNDS_HPP_
#define BEXP_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bexp/divergences.hpp"
#include "bexp/losses.hpp"
#include "bexp/numeric.hpp"
#include "bexp/weight.hpp"

namespace bexp {

struct BoundResult {
  double value;
  std::vector<double> witness;
  std::string method;
};

/*
 * Smallest regret B_w(eta, estimate) over pairs whose cost-weighted regret
 * at c0 equals alpha.
 */
inline double surrogate_bound(const ProperLoss& loss, double c0, double alpha) {
  if (!(c0 > 0.0 && c0 < 1.0)) throw ArgumentError("c0 must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < std::min(c0, 1.0 - c0))) {
    throw ArgumentError("alpha must lie in (0, min(c0, 1 - c0))");
  }
  const double w0 = loss.W(c0);
  const double below = loss.Wbar(c0 - alpha) + alpha * w0;
  const double above = loss.Wbar(c0 + alpha) - alpha * w0;
  return std::max(0.0, std::min(below, above) - loss.Wbar(c0));
}

// Points (pi_i, psi_i) bounding the 0-1 Bayes risk curve from above.
class PinskerConstraint {
 public:
  struct Point {
    double prior;
    double risk;
  };

  explicit PinskerConstraint(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) throw ArgumentError("at least one constraint point is required");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const Point& p = points_[i];
      if (!(p.prior > 0.0 && p.prior < 1.0)) {
        throw DomainError("constraint priors must lie in (0,1)");
      }
      if (i > 0 && !(points_[i - 1].prior < p.prior)) {
        throw DomainError("constraint priors must be strictly increasing");
      }
      if (!(p.risk >= 0.0 && p.risk <= std::min(p.prior, 1.0 - p.prior) + 1e-15)) {
        throw DomainError("constraint risk must lie under the tent min(pi, 1 - pi)");
      }
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (lower(i) > upper(i) + 1e-12) {
        throw InfeasibleError("constraint points are not concave; no admissible slopes");
      }
    }
  }

  // The symmetric single-point constraint induced by a variational distance.
  static PinskerConstraint from_variational(double v) {
    if (!(v >= 0.0 && v < 2.0)) throw DomainError("variational distance must lie in [0,2)");
    return PinskerConstraint({{0.5, 0.5 - v / 4.0}});
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }

  double prior(std::ptrdiff_t i) const {
    if (i < 0) return 0.0;
    if (i >= static_cast<std::ptrdiff_t>(points_.size())) return 1.0;
    return points_[i].prior;
  }

  double risk(std::ptrdiff_t i) const {
    if (i < 0 || i >= static_cast<std::ptrdiff_t>(points_.size())) return 0.0;
    return points_[i].risk;
  }

  // Admissible slope interval of the supporting line at point i.
  double lower(std::size_t i) const {
    const auto k = static_cast<std::ptrdiff_t>(i);
    return (risk(k + 1) - risk(k)) / (prior(k + 1) - prior(k));
  }
  double upper(std::size_t i) const {
    const auto k = static_cast<std::ptrdiff_t>(i);
    return (risk(k) - risk(k - 1)) / (prior(k) - prior(k - 1));
  }

 private:
  std::vector<Point> points_;
};

namespace details {

struct Line {
  double slope;
  double intercept;
  double at(double x) const { return slope * x + intercept; }
};

/*
 * int_0^1 phi(pi) gamma(pi) dpi where phi is the gap between the tent and
 * the lower envelope of the tent and the supporting lines. Each linear piece
 * A pi + B of phi contributes F(x1) - F(x0), F(x) = (A x + B) G(x) - A Gbar(x).
 */
inline double pinsker_objective(const PinskerConstraint& cons, const std::vector<double>& slopes,
                                const Antiderivatives& anti) {
  std::vector<Line> lines{{1.0, 0.0}, {-1.0, 1.0}};
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const auto& p = cons.points()[i];
    lines.push_back({slopes[i], p.risk - slopes[i] * p.prior});
  }
  std::vector<double> xs{0.0, 0.5, 1.0};
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      const double ds = lines[a].slope - lines[b].slope;
      if (ds == 0.0) continue;
      const double x = (lines[b].intercept - lines[a].intercept) / ds;
      if (x > 0.0 && x < 1.0) xs.push_back(x);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  auto envelope = [&](double x) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
      if (lines[k].at(x) < lines[best].at(x)) best = k;
    }
    return best;
  };

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double x0 = xs[k], x1 = xs[k + 1];
    if (x1 - x0 <= 0.0) continue;
    const double mid = 0.5 * (x0 + x1);
    const Line& tent = mid < 0.5 ? lines[0] : lines[1];
    const Line& low = lines[envelope(mid)];
    const double A = tent.slope - low.slope;
    const double B = tent.intercept - low.intercept;
    if (std::abs(A * mid + B) <= 1e-15 && std::abs(A) <= 1e-15) continue;
    auto F = [&](double x) {
      if (x == 0.0 || x == 1.0) {
        // phi vanishes at the endpoints, so only the Gbar term survives
        if (A == 0.0) return 0.0;
        const double gb = anti.second(x);
        if (std::isinf(gb)) {
          const bool opens = x == 0.0 ? A > 1e-14 : A < -1e-14;
          if (!opens) return 0.0;
          return x == 0.0 ? -kInf : kInf;
        }
        return -A * gb;
      }
      return (A * x + B) * anti.first(x) - A * anti.second(x);
    };
    const double piece = F(x1) - F(x0);
    if (std::isinf(piece)) return kInf;
    total += piece;
  }
  return std::max(0.0, total);
}

}  // namespace details

namespace details {

/*
 * The envelope min(tent, supporting lines) is itself a 0-1 Bayes risk
 * curve: a kink at x with slope drop d is the outcome (d (1 - x), d x).
 */
inline BinaryExperiment envelope_experiment(const PinskerConstraint& cons,
                                            const std::vector<double>& slopes) {
  std::vector<Line> lines{{1.0, 0.0}, {-1.0, 1.0}};
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const auto& p = cons.points()[i];
    lines.push_back({slopes[i], p.risk - slopes[i] * p.prior});
  }
  auto lowest = [&](double x) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
      if (lines[k].at(x) < lines[best].at(x)) best = k;
    }
    return best;
  };
  std::vector<double> xs{0.0, 0.5, 1.0};
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      const double ds = lines[a].slope - lines[b].slope;
      if (ds == 0.0) continue;
      const double x = (lines[b].intercept - lines[a].intercept) / ds;
      if (x > 0.0 && x < 1.0) xs.push_back(x);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> p, q;
  double prev = 1.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    if (xs[k + 1] - xs[k] <= 0.0) continue;
    const double s = lines[lowest(0.5 * (xs[k] + xs[k + 1]))].slope;
    const double drop = prev - s;
    if (drop > 1e-15) {
      p.push_back(drop * (1.0 - xs[k]));
      q.push_back(drop * xs[k]);
    }
    prev = s;
  }
  if (prev + 1.0 > 1e-15) {
    p.push_back(0.0);
    q.push_back(prev + 1.0);
  }
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] /= sp;
    q[i] /= sq;
  }
  return BinaryExperiment(std::move(p), std::move(q));
}

// Coordinate descent over the admissible slope box.
template <typename Objective>
BoundResult minimize_slopes(const PinskerConstraint& cons, Objective&& objective) {
  const std::size_t n = cons.size();
  std::vector<double> lo(n), hi(n), a(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = cons.lower(i);
    hi[i] = std::max(lo[i], cons.upper(i));
    a[i] = 0.5 * (lo[i] + hi[i]);
  }
  double best = objective(a);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (hi[i] - lo[i] <= 0.0) continue;
      std::vector<double> trial = a;
      auto along = [&](double x) {
        trial[i] = x;
        return objective(trial);
      };
      const Extremum r = scan_golden_min(along, lo[i], hi[i], 9, 1e-11);
      if (r.value < best) {
        moved = std::max(moved, std::abs(r.x - a[i]));
        a[i] = r.x;
        best = r.value;
      }
    }
    if (moved < 1e-8) break;
  }
  return {std::max(0.0, best), a, "pinsker_general"};
}

}  // namespace details

/*
 * Lower bound on a divergence with weight gamma among experiments whose 0-1
 * Bayes risk passes below the constraint points. Minimizes over admissible
 * supporting slopes by coordinate descent.
 */
inline BoundResult pinsker_general(const Antiderivatives& anti, const PinskerConstraint& cons) {
  return details::minimize_slopes(
      cons, [&](const std::vector<double>& s) { return details::pinsker_objective(cons, s, anti); });
}

inline BoundResult pinsker_general(const WeightFunction& gamma, const PinskerConstraint& cons) {
  return pinsker_general(Antiderivatives::of(gamma), cons);
}

// Same bound evaluated exactly as I_f of the envelope experiment.
inline BoundResult pinsker_general(const ConvexFunction& f, const PinskerConstraint& cons) {
  return details::minimize_slopes(cons, [&](const std::vector<double>& s) {
    return f_divergence_direct(details::envelope_experiment(cons, s), f);
  });
}

inline BoundResult pinsker_general(const DivergenceSpec& spec, const PinskerConstraint& cons) {
  if (spec.f) return pinsker_general(*spec.f, cons);
  return pinsker_general(spec.gamma, cons);
}

/*
 * Best lower bound on KL at a given variational distance, minimized over
 * the free slope parameter.
 */
inline BoundResult kl_pinsker_explicit(double v) {
  if (!(v >= 0.0 && v < 2.0)) throw DomainError("variational distance must lie in [0,2)");
  if (v == 0.0) return {0.0, {0.0}, "kl_pinsker_explicit"};
  auto term = [](double coeff, double num, double den) {
    if (coeff == 0.0) return 0.0;
    return coeff * std::log(num / den);
  };
  auto g = [&](double b) {
    const double first = term((v + 2.0 - b) / 4.0, b - 2.0 - v, b - 2.0 + v);
    const double second = term((b + 2.0 - v) / 4.0, b + 2.0 - v, b + 2.0 + v);
    const double r = first + second;
    return std::isnan(r) ? kInf : r;
  };
  const double lo = v - 2.0, hi = 2.0 - v;
  const int grid = 1000;
  double best_b = lo, best = g(lo);
  int best_k = 0;
  for (int k = 1; k < grid; ++k) {
    const double b = lo + (hi - lo) * k / grid;
    const double val = g(b);
    if (val < best) {
      best = val;
      best_b = b;
      best_k = k;
    }
  }
  const double step_b = (hi - lo) / grid;
  const double a = std::max(lo, lo + (best_k - 1) * step_b);
  const double c = std::min(hi - 1e-15 * (hi - lo), lo + (best_k + 1) * step_b);
  const Extremum r = golden_min(g, a, c, 1e-14);
  if (r.value < best) {
    best = r.value;
    best_b = r.x;
  }
  return {std::max(0.0, best), {best_b}, "kl_pinsker_explicit"};
}

namespace details {

// Points (V(t), L(t)) of the parametric lower boundary for KL.
inline double fedotov_v(double t) {
  if (t < 1e-3) return t - t * t * t / 9.0;
  const double c = 1.0 / std::tanh(t) - 1.0 / t;
  return t * (1.0 - c * c);
}

inline double fedotov_l(double t) {
  if (t < 1e-3) return t * t / 2.0 - t * t * t * t / 12.0;
  const double e = std::exp(-2.0 * t);
  // log(t / sinh t) = log(2t) - t - log(1 - e^{-2t})
  const double log_ratio = std::log(2.0 * t) - t - std::log1p(-e);
  const double coth = (1.0 + e) / (1.0 - e);
  const double inv_sinh = 2.0 * std::exp(-t) / (1.0 - e);
  return log_ratio + t * coth - t * t * inv_sinh * inv_sinh;
}

}  // namespace details

inline double fedotov_reference(double v) {
  if (!(v >= 0.0 && v < 2.0)) throw DomainError("variational distance must lie in [0,2)");
  if (v == 0.0) return 0.0;
  const double t_max = 1e6;
  if (v > details::fedotov_v(t_max)) {
    throw DomainError("variational distance beyond the tabulated parametric range");
  }
  // monotone inversion of V(t) on a log scale
  const double u = bisect_increasing([](double s) { return details::fedotov_v(std::exp(s)); },
                                     v, std::log(1e-8), std::log(t_max));
  return details::fedotov_l(std::exp(u));
}

inline std::map<std::string, double> classic_comparators(double v) {
  if (!(v >= 0.0 && v < 2.0)) throw DomainError("variational distance must lie in [0,2)");
  const double v2 = v * v, v4 = v2 * v2;
  const double vajda = std::log((2.0 + v) / (2.0 - v)) - 2.0 * v / (2.0 + v);
  return {{"pinsker", v2 / 2.0},
          {"kullback", v2 / 2.0 + v4 / 36.0},
          {"topsoe", v2 / 2.0 + v4 / 36.0 + v4 * v2 / 270.0},
          {"vajda", vajda},
          {"toussaint", std::max(vajda, v2 / 2.0 + v4 / 36.0 + v4 * v4 / 288.0)}};
}

inline double pinsker_special(const std::string& name, double v) {
  if (!(v >= 0.0 && v < 2.0)) throw DomainError("variational distance must lie in [0,2)");
  const double v2 = v * v;
  if (name == "hellinger") return 2.0 - std::sqrt(4.0 - v2);
  if (name == "jeffreys") return v * std::log((2.0 + v) / (2.0 - v));
  if (name == "sym_chi2") return 8.0 * v2 / (4.0 - v2);
  if (name == "jensen_shannon") {
    return (0.5 - v / 4.0) * std::log(2.0 - v) + (0.5 + v / 4.0) * std::log(2.0 + v) -
           std::log(2.0);
  }
  if (name == "agm") return std::log(4.0 / std::sqrt(4.0 - v2)) - std::log(2.0);
  if (name == "chi2") return v < 1.0 ? v2 : v / (2.0 - v);
  if (name == "kl") return kl_pinsker_explicit(v).value;
  throw ArgumentError("no closed-form bound for '" + name + "'");
}

}  // namespace bexp

#endif  // BEXP_BOUNDS_HPP_
