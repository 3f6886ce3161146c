#ifndef BEXP_INFORMATION_HPP_
#define BEXP_INFORMATION_HPP_

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "bexp/convex.hpp"
#include "bexp/experiments.hpp"
#include "bexp/losses.hpp"
#include "bexp/numeric.hpp"
#include "bexp/weight.hpp"

namespace bexp {

// A concave Bayes risk curve on [0,1].
using BayesRisk = RealFn;

inline BayesRisk bayes_risk_of(const ProperLoss& loss) {
  auto l = std::make_shared<ProperLoss>(loss);
  return [l](double eta) { return bayes_risk(*l, eta); };
}

/*
 * L(pi) - sum_i m_i L(eta_i).
 */
inline double statistical_information(const Task& task, const BayesRisk& bayes) {
  const double at_prior = bayes(task.prior());
  if (std::isinf(at_prior)) return kInf;
  double mixed = 0.0;
  const auto& m = task.mixture();
  const auto& eta = task.posterior();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = bayes(eta[i]);
    if (std::isinf(v)) return kInf;
    mixed += m[i] * v;
  }
  return std::max(0.0, at_prior - mixed);
}

inline double statistical_information(const Task& task, const ProperLoss& loss) {
  return statistical_information(task, bayes_risk_of(loss));
}

struct BregmanInformation {
  double value;
  double minimizer;
};

namespace details {

template <typename Divergence>
BregmanInformation minimize_mean_divergence(const Task& task, Divergence&& div) {
  const auto& m = task.mixture();
  const auto& eta = task.posterior();
  const double lo = *std::min_element(eta.begin(), eta.end());
  const double hi = *std::max_element(eta.begin(), eta.end());
  auto objective = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) acc += m[i] * div(eta[i], s);
    return acc;
  };
  if (hi - lo <= 1e-15) return {0.0, lo};
  const Extremum r = golden_min(objective, lo, hi, 1e-14);
  return {std::max(0.0, r.value), r.x};
}

}  // namespace details

/*
 * min_s sum_i m_i B(eta_i, s) for the Bregman divergence of -L.
 */
inline BregmanInformation bregman_information(const Task& task, const BayesRisk& bayes) {
  return details::minimize_mean_divergence(task, [&](double x, double s) {
    const double h = std::min({1e-5, 0.5 * s, 0.5 * (1.0 - s)});
    const double slope = first_derivative(bayes, s, h);
    return -bayes(x) + bayes(s) + (x - s) * slope;
  });
}

inline BregmanInformation bregman_information(const Task& task, const ProperLoss& loss) {
  return details::minimize_mean_divergence(
      task, [&](double x, double s) { return regret(loss, x, s); });
}

/*
 * The generator whose divergence equals the statistical information of the
 * Bayes risk at prior pi.
 */
inline ConvexFunction f_from_loss(const BayesRisk& bayes, double prior) {
  details::check_prior(prior);
  const double at_prior = bayes(prior);
  ConvexFunction f;
  f.eval = [bayes, prior, at_prior](double t) {
    const double mix = prior * t + 1.0 - prior;
    return at_prior - mix * bayes(prior * t / mix);
  };
  f.limit_at_zero = at_prior - (1.0 - prior) * bayes(0.0);
  f.slope_at_infinity = -prior * bayes(1.0);
  return f;
}

/*
 * The Bayes risk at prior pi generated by f:
 *   L(eta) = -((1 - eta) / (1 - pi)) f(((1 - pi) / pi) (eta / (1 - eta))).
 */
inline BayesRisk loss_from_f(const ConvexFunction& f, double prior) {
  details::check_prior(prior);
  return [f, prior](double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0,1]");
    if (eta == 1.0) return -f.slope_at_infinity / prior;
    if (eta == 0.0) return -f.limit_at_zero / (1.0 - prior);
    return -((1.0 - eta) / (1.0 - prior)) * f(lambda_map(prior, eta));
  };
}

namespace details {

inline double nu(double prior, double c) { return (1.0 - c) * prior + (1.0 - prior) * c; }

// The involution c -> pi (1 - c) / nu(pi, c) relating the two weight variables.
inline double weight_variable_map(double prior, double c) {
  return prior * (1.0 - c) / nu(prior, c);
}

}  // namespace details

/*
 * Loss weight at prior pi from a divergence weight.
 */
inline WeightFunction w_from_gamma(const WeightFunction& gamma, double prior) {
  details::check_prior(prior);
  auto g = std::make_shared<WeightFunction>(gamma);
  RealFn smooth;
  if (gamma.has_smooth()) {
    smooth = [g, prior](double c) {
      const double n = details::nu(prior, c);
      return prior * (1.0 - prior) / (n * n * n) * g->smooth(details::weight_variable_map(prior, c));
    };
  }
  std::vector<Atom> atoms;
  for (const Atom& a : gamma.atoms()) {
    const double c = details::weight_variable_map(prior, a.location);
    atoms.push_back({c, a.mass / details::nu(prior, c)});
  }
  std::vector<double> cuts;
  for (double b : gamma.breakpoints()) cuts.push_back(details::weight_variable_map(prior, b));
  if (!smooth) return WeightFunction::atoms_only(std::move(atoms));
  return WeightFunction(smooth, std::move(atoms), std::move(cuts));
}

inline WeightFunction gamma_from_w(const WeightFunction& w, double prior) {
  details::check_prior(prior);
  auto g = std::make_shared<WeightFunction>(w);
  RealFn smooth;
  const double pq = prior * (1.0 - prior);
  if (w.has_smooth()) {
    smooth = [g, prior, pq](double t) {
      const double n = details::nu(prior, t);
      return pq * pq / (n * n * n) * g->smooth(details::weight_variable_map(prior, t));
    };
  }
  std::vector<Atom> atoms;
  for (const Atom& a : w.atoms()) {
    const double t = details::weight_variable_map(prior, a.location);
    atoms.push_back({t, pq * a.mass / details::nu(prior, t)});
  }
  std::vector<double> cuts;
  for (double b : w.breakpoints()) cuts.push_back(details::weight_variable_map(prior, b));
  if (!smooth) return WeightFunction::atoms_only(std::move(atoms));
  return WeightFunction(smooth, std::move(atoms), std::move(cuts));
}

}  // namespace bexp

#endif  // BEXP_INFORMATION_HPP_
