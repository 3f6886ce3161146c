#ifndef BEXP_EXPERIMENTS_HPP_
#define BEXP_EXPERIMENTS_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bexp/numeric.hpp"

namespace bexp {

class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<double> masses) : masses_(std::move(masses)) {
    if (masses_.empty()) throw DomainError("distribution must have at least one outcome");
    double total = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
      const double m = masses_[i];
      if (!std::isfinite(m) || m < 0.0) {
        throw DomainError("mass at outcome " + std::to_string(i) +
                          " must be finite and nonnegative");
      }
      total += m;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw DomainError("masses must sum to one (got " + std::to_string(total) + ")");
    }
  }

  std::size_t size() const { return masses_.size(); }
  double operator[](std::size_t i) const { return masses_[i]; }
  const std::vector<double>& masses() const { return masses_; }

 private:
  std::vector<double> masses_;
};

// A pair (P, Q) of distributions over the same finite outcome set.
class BinaryExperiment {
 public:
  BinaryExperiment(DiscreteDistribution p, DiscreteDistribution q)
      : p_(std::move(p)), q_(std::move(q)) {
    if (p_.size() != q_.size()) {
      throw ArgumentError("P and Q must have the same number of outcomes");
    }
  }

  BinaryExperiment(std::vector<double> p, std::vector<double> q)
      : BinaryExperiment(DiscreteDistribution(std::move(p)),
                         DiscreteDistribution(std::move(q))) {}

  std::size_t size() const { return p_.size(); }
  double p(std::size_t i) const { return p_[i]; }
  double q(std::size_t i) const { return q_[i]; }
  const std::vector<double>& p() const { return p_.masses(); }
  const std::vector<double>& q() const { return q_.masses(); }

  BinaryExperiment swapped() const { return BinaryExperiment(q_, p_); }

 private:
  DiscreteDistribution p_;
  DiscreteDistribution q_;
};

/*
 * An experiment with a prior on the positive class. Outcomes carrying no
 * mixture mass are dropped from the mixture and posterior vectors.
 */
class Task {
 public:
  Task(double prior, BinaryExperiment exp) : prior_(prior), exp_(std::move(exp)) {
    if (!(prior > 0.0 && prior < 1.0)) throw DomainError("prior must lie in (0,1)");
    for (std::size_t i = 0; i < exp_.size(); ++i) {
      const double pm = prior * exp_.p(i);
      const double m = pm + (1.0 - prior) * exp_.q(i);
      if (m > 0.0) {
        mixture_.push_back(m);
        posterior_.push_back(std::min(1.0, pm / m));
      }
    }
  }

  double prior() const { return prior_; }
  const BinaryExperiment& experiment() const { return exp_; }
  const std::vector<double>& mixture() const { return mixture_; }
  const std::vector<double>& posterior() const { return posterior_; }

 private:
  double prior_;
  BinaryExperiment exp_;
  std::vector<double> mixture_;
  std::vector<double> posterior_;
};

// Randomized test: probability of declaring "positive" at each outcome.
class BinaryTest {
 public:
  explicit BinaryTest(std::vector<double> accept) : accept_(std::move(accept)) {
    for (double a : accept_) {
      if (!(a >= 0.0 && a <= 1.0)) throw DomainError("test probabilities must lie in [0,1]");
    }
  }
  std::size_t size() const { return accept_.size(); }
  double operator[](std::size_t i) const { return accept_[i]; }

 private:
  std::vector<double> accept_;
};

struct ClassificationRates {
  double tp;
  double fp;
  double tn;
  double fn;
};

inline ClassificationRates classification_rates(const BinaryExperiment& exp,
                                                const BinaryTest& test) {
  if (exp.size() != test.size()) throw ArgumentError("test and experiment sizes differ");
  double tp = 0.0, fp = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    tp += exp.p(i) * test[i];
    fp += exp.q(i) * test[i];
  }
  return {tp, fp, 1.0 - fp, 1.0 - tp};
}

namespace details {

inline void check_prior(double prior) {
  if (!(prior > 0.0 && prior < 1.0)) throw DomainError("prior must lie in (0,1)");
}

}  // namespace details

// Maps a posterior threshold to the matching likelihood ratio.
inline double lambda_map(double prior, double c) {
  details::check_prior(prior);
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError("lambda_map: c must lie in [0,1]");
  if (c == 1.0) return kInf;
  return ((1.0 - prior) / prior) * (c / (1.0 - c));
}

inline double lambda_inv(double prior, double t) {
  details::check_prior(prior);
  if (!(t >= 0.0)) throw DomainError("lambda_inv: t must be nonnegative");
  if (std::isinf(t)) return 1.0;
  return prior * t / (prior * t + 1.0 - prior);
}

inline double bayes_risk_01(double prior, const BinaryExperiment& exp) {
  details::check_prior(prior);
  double r = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    r += std::min(prior * exp.p(i), (1.0 - prior) * exp.q(i));
  }
  return r;
}

inline double statistical_information_01(double prior, const BinaryExperiment& exp) {
  const double v = std::min(prior, 1.0 - prior) - bayes_risk_01(prior, exp);
  return std::max(0.0, v);
}

struct RocVertex {
  double fp;
  double tp;
};

/*
 * Vertices of the upper concave ROC envelope: outcomes sorted by decreasing
 * score, equal scores merged, starting at (0,0). Atoms absent from both
 * distributions are ignored.
 */
template <typename Less>
std::vector<RocVertex> threshold_vertices(const BinaryExperiment& exp, Less&& before,
                                          std::vector<std::size_t> order) {
  std::stable_sort(order.begin(), order.end(), before);
  std::vector<RocVertex> v{{0.0, 0.0}};
  double fp = 0.0, tp = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    fp += exp.q(order[k]);
    tp += exp.p(order[k]);
    const bool tie_next = k + 1 < order.size() && !before(order[k], order[k + 1]) &&
                          !before(order[k + 1], order[k]);
    if (!tie_next) v.push_back({std::min(fp, 1.0), std::min(tp, 1.0)});
  }
  v.back() = {1.0, 1.0};
  return v;
}

inline std::vector<RocVertex> likelihood_ratio_vertices(const BinaryExperiment& exp) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (exp.p(i) > 0.0 || exp.q(i) > 0.0) order.push_back(i);
  }
  // a before b when p_a / q_a > p_b / q_b, compared without division
  auto before = [&](std::size_t a, std::size_t b) {
    return exp.p(a) * exp.q(b) > exp.p(b) * exp.q(a);
  };
  return threshold_vertices(exp, before, order);
}

// Piecewise-linear interpolation of the envelope at a false positive rate.
inline double envelope_at(const std::vector<RocVertex>& v, double alpha) {
  double best = v.front().tp;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const RocVertex& a = v[k];
    const RocVertex& b = v[k + 1];
    if (b.fp <= alpha) {
      best = std::max(best, b.tp);
    } else if (a.fp <= alpha) {
      const double t = (alpha - a.fp) / (b.fp - a.fp);
      best = std::max(best, a.tp + t * (b.tp - a.tp));
      break;
    } else {
      break;
    }
  }
  return std::min(best, 1.0);
}

inline double neyman_pearson_beta(const BinaryExperiment& exp, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
  return envelope_at(likelihood_ratio_vertices(exp), alpha);
}

}  // namespace bexp

#endif  // BEXP_EXPERIMENTS_HPP_
