#ifndef BEXP_CURVES_HPP_
#define BEXP_CURVES_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bexp/experiments.hpp"
#include "bexp/numeric.hpp"

namespace bexp {

enum class CurveKind { risk_vs_cost, risk_vs_prior, roc, beta };

inline const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::risk_vs_cost: return "risk_vs_cost";
    case CurveKind::risk_vs_prior: return "risk_vs_prior";
    case CurveKind::roc: return "roc";
    case CurveKind::beta: return "beta";
  }
  return "unknown";
}

// Ordered samples of a curve; x is strictly increasing.
struct CurvePoints {
  CurveKind kind;
  std::vector<double> x;
  std::vector<double> y;
  std::map<std::string, std::string> metadata;
};

inline void check_grid(const std::vector<double>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i - 1] < grid[i])) throw DomainError("grid must be strictly increasing");
  }
}

/*
 * Expected cost-weighted risk of an estimate at each cost c:
 *   sum_i m_i [(1 - eta_i) c [e_i >= c] + eta_i (1 - c) [e_i < c]].
 */
inline CurvePoints risk_curve(const Task& task, const std::vector<double>& estimate,
                              const std::vector<double>& costs) {
  const BinaryExperiment& exp = task.experiment();
  if (estimate.size() != exp.size()) throw ArgumentError("estimate length differs from support");
  for (double e : estimate) {
    if (!(e >= 0.0 && e <= 1.0)) throw DomainError("estimates must lie in [0,1]");
  }
  check_grid(costs);
  const double pi = task.prior();
  CurvePoints out{CurveKind::risk_vs_cost, costs, {}, {{"prior", std::to_string(pi)}}};
  for (double c : costs) {
    double r = 0.0;
    for (std::size_t i = 0; i < exp.size(); ++i) {
      const double pos = pi * exp.p(i), neg = (1.0 - pi) * exp.q(i);
      r += estimate[i] >= c ? neg * c : pos * (1.0 - c);
    }
    out.y.push_back(r);
  }
  return out;
}

// Posterior probabilities of the outcomes; zero-mass outcomes get the prior.
inline std::vector<double> posterior_estimate(const Task& task) {
  const BinaryExperiment& exp = task.experiment();
  std::vector<double> eta(exp.size());
  const double pi = task.prior();
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double m = pi * exp.p(i) + (1.0 - pi) * exp.q(i);
    eta[i] = m > 0.0 ? pi * exp.p(i) / m : pi;
  }
  return eta;
}

/*
 * ROC vertices of threshold tests on a score, higher scores declared
 * positive first, with linear interpolation between vertices.
 */
inline CurvePoints roc_curve(const BinaryExperiment& exp, const std::vector<double>& score) {
  if (score.size() != exp.size()) throw ArgumentError("score length differs from support");
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (exp.p(i) > 0.0 || exp.q(i) > 0.0) order.push_back(i);
  }
  auto before = [&](std::size_t a, std::size_t b) { return score[a] > score[b]; };
  const auto v = threshold_vertices(exp, before, order);
  CurvePoints out{CurveKind::roc, {}, {}, {}};
  for (const RocVertex& p : v) {
    if (!out.x.empty() && p.fp <= out.x.back()) {
      out.y.back() = std::max(out.y.back(), p.tp);
      continue;
    }
    out.x.push_back(p.fp);
    out.y.push_back(p.tp);
  }
  return out;
}

inline std::vector<double> likelihood_ratio_score(const BinaryExperiment& exp) {
  std::vector<double> s(exp.size());
  for (std::size_t i = 0; i < exp.size(); ++i) {
    s[i] = exp.q(i) > 0.0 ? exp.p(i) / exp.q(i) : (exp.p(i) > 0.0 ? kInf : 0.0);
  }
  return s;
}

inline double auc(const CurvePoints& roc) {
  double a = 0.0;
  for (std::size_t i = 1; i < roc.x.size(); ++i) {
    a += 0.5 * (roc.x[i] - roc.x[i - 1]) * (roc.y[i] + roc.y[i - 1]);
  }
  return a;
}

/*
 * 0-1 Bayes risk at prior pi from a Neyman-Pearson curve:
 *   min_a (1 - pi) a + pi (1 - beta(a)).
 */
inline double minLL_from_beta(const RealFn& beta, double prior) {
  details::check_prior(prior);
  auto objective = [&](double a) { return (1.0 - prior) * a + prior * (1.0 - beta(a)); };
  const Extremum r = scan_golden_min(objective, 0.0, 1.0, 65, 1e-15);
  return std::clamp(r.value, 0.0, std::min(prior, 1.0 - prior));
}

/*
 * Neyman-Pearson curve from a 0-1 Bayes risk curve:
 *   inf_{pi in (0,1]} ((1 - pi) a + pi - L(pi)) / pi.
 * The objective is convex in 1/pi, so a log-scale scan followed by golden
 * section finds the infimum.
 */
inline double beta_from_minLL(const RealFn& bayes, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
  auto objective = [&](double u) {
    const double pi = std::exp(u);
    return ((1.0 - pi) * alpha + pi - bayes(pi)) / pi;
  };
  const Extremum r = scan_golden_min(objective, std::log(1e-9), 0.0, 256, 1e-15);
  return std::clamp(r.value, 0.0, 1.0);
}

// A function of one variable with its derivative.
struct SmoothCurve {
  RealFn value;
  RealFn derivative;
};

struct ConversionResult {
  double value;
  bool used_fallback;
};

namespace details {

inline bool monotone_on_grid(const RealFn& g, double lo, double hi, bool increasing) {
  double prev = g(lo);
  for (int k = 1; k <= 64; ++k) {
    const double x = lo + (hi - lo) * k / 64.0;
    const double v = g(x);
    if (increasing ? v < prev - 1e-12 : v > prev + 1e-12) return false;
    prev = v;
  }
  return true;
}

}  // namespace details

/*
 * Bayes risk at pi through the point where beta' = (1 - pi) / pi.
 */
inline ConversionResult minLL_explicit(const SmoothCurve& beta, double prior) {
  details::check_prior(prior);
  const double eps = 1e-9;
  if (!details::monotone_on_grid(beta.derivative, eps, 1.0 - eps, false)) {
    return {minLL_from_beta(beta.value, prior), true};
  }
  const double target = (1.0 - prior) / prior;
  // beta' is decreasing, so -beta' is increasing
  const double a = bisect_increasing([&](double x) { return -beta.derivative(x); }, -target,
                                     eps, 1.0 - eps);
  double alpha = a;
  if (-beta.derivative(eps) >= -target) alpha = 0.0;
  if (-beta.derivative(1.0 - eps) <= -target) alpha = 1.0;
  const double v = (1.0 - prior) * alpha + prior * (1.0 - beta.value(alpha));
  return {v, false};
}

/*
 * Neyman-Pearson curve at alpha through the inverse of
 * L(pi) - pi L'(pi), capped at 1.
 */
inline ConversionResult beta_explicit(const SmoothCurve& bayes, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
  auto tilde = [&](double pi) { return bayes.value(pi) - pi * bayes.derivative(pi); };
  const double eps = 1e-9;
  if (!details::monotone_on_grid(tilde, eps, 1.0, true)) {
    return {beta_from_minLL(bayes.value, alpha), true};
  }
  double pi = 1.0;
  if (alpha < tilde(1.0)) pi = bisect_increasing(tilde, alpha, eps, 1.0);
  const double v = ((1.0 - pi) * alpha + pi - bayes.value(pi)) / pi;
  return {std::clamp(v, 0.0, 1.0), false};
}

// The Neyman-Pearson curve of the Bayes risk g pi (1 - pi).
inline double beta_gamma_family(double g, double alpha) {
  const double s = std::min(std::sqrt(alpha / g), 1.0);
  if (s == 0.0) return 1.0 - g;
  return alpha / s + g * s + 1.0 - alpha - g;
}

// Cost line L(c) = at0 + c (at1 - at0) in the risk diagram.
struct CostLine {
  double at0;
  double at1;
  double operator()(double c) const { return at0 + c * (at1 - at0); }
};

// TP = slope FP + intercept in the ROC diagram.
struct RocLine {
  double slope;
  double intercept;
};

inline CostLine cost_line_from_roc_point(double fp, double tp, double prior) {
  details::check_prior(prior);
  return {prior * (1.0 - tp), (1.0 - prior) * fp};
}

inline RocLine roc_line_from_cost_point(double c, double risk, double prior) {
  details::check_prior(prior);
  if (!(c > 0.0 && c < 1.0)) throw DomainError("cost must lie in (0,1) for a proper dual line");
  const double den = prior * (1.0 - c);
  return {(1.0 - prior) * c / den, 1.0 - risk / den};
}

inline RocVertex intersect(const RocLine& a, const RocLine& b) {
  if (a.slope == b.slope) throw DomainError("parallel dual lines do not meet");
  const double fp = (b.intercept - a.intercept) / (a.slope - b.slope);
  return {fp, a.slope * fp + a.intercept};
}

}  // namespace bexp

#endif  // BEXP_CURVES_HPP_
