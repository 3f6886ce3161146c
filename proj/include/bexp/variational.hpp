#ifndef BEXP_VARIATIONAL_HPP_
#define BEXP_VARIATIONAL_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bexp/convex.hpp"
#include "bexp/experiments.hpp"
#include "bexp/numeric.hpp"

namespace bexp {

/*
 * A finite set of real functions on the outcomes of an experiment, each
 * bounded in sup-norm by `bound`.
 */
class FunctionClass {
 public:
  FunctionClass(std::vector<std::vector<double>> functions, double bound = 1.0,
                bool symmetric = false)
      : functions_(std::move(functions)), bound_(bound), symmetric_(symmetric) {
    if (!(bound_ > 0.0)) throw DomainError("function class bound must be positive");
    for (std::size_t j = 0; j < functions_.size(); ++j) {
      if (functions_[j].size() != (functions_.empty() ? 0 : functions_[0].size())) {
        throw ShapeError("function " + std::to_string(j) + " has a different length");
      }
      for (double v : functions_[j]) {
        if (!(std::abs(v) <= bound_)) {
          throw DomainError("function " + std::to_string(j) + " exceeds the class bound");
        }
      }
    }
  }

  // All 2^n functions with values in {-1, +1}.
  static FunctionClass complete_sign_class(std::size_t n) {
    if (n == 0 || n > 20) throw ArgumentError("complete sign class needs 1 <= n <= 20");
    std::vector<std::vector<double>> fs;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<double> r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = (mask >> i) & 1u ? 1.0 : -1.0;
      fs.push_back(std::move(r));
    }
    return FunctionClass(std::move(fs), 1.0, true);
  }

  // Adds the negation of every member that is missing.
  FunctionClass close_under_negation() const {
    std::vector<std::vector<double>> fs = functions_;
    for (const auto& r : functions_) {
      std::vector<double> neg(r.size());
      std::transform(r.begin(), r.end(), neg.begin(), [](double v) { return -v; });
      if (std::find(fs.begin(), fs.end(), neg) == fs.end()) fs.push_back(std::move(neg));
    }
    return FunctionClass(std::move(fs), bound_, true);
  }

  // True when every member takes values in {-a, +a}.
  bool sign_closed() const {
    for (const auto& r : functions_) {
      for (double v : r) {
        if (std::abs(std::abs(v) - bound_) > 0.0) return false;
      }
    }
    return true;
  }

  const std::vector<std::vector<double>>& functions() const { return functions_; }
  const std::vector<double>& operator[](std::size_t j) const { return functions_[j]; }
  std::size_t size() const { return functions_.size(); }
  bool empty() const { return functions_.empty(); }
  double bound() const { return bound_; }
  bool symmetric() const { return symmetric_; }

 private:
  std::vector<std::vector<double>> functions_;
  double bound_;
  bool symmetric_;
};

struct VariationalResult {
  double value;
  std::size_t witness;
};

namespace details {

// pi E_P r - (1 - pi) E_Q r
inline double signed_mean_gap(const BinaryExperiment& exp, double prior,
                              const std::vector<double>& r) {
  double acc = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    acc += prior * exp.p(i) * r[i] - (1.0 - prior) * exp.q(i) * r[i];
  }
  return acc;
}

inline void check_class(const BinaryExperiment& exp, const FunctionClass& cls) {
  if (cls.empty()) throw ArgumentError("function class is empty");
  if (cls[0].size() != exp.size()) {
    throw ShapeError("class functions have length " + std::to_string(cls[0].size()) +
                     " but the experiment has " + std::to_string(exp.size()) + " outcomes");
  }
}

}  // namespace details

/*
 * 2 max_r |pi E_P r - (1 - pi) E_Q r|; the absolute value is dropped for
 * classes closed under negation.
 */
inline VariationalResult generalized_variational(const BinaryExperiment& exp, double prior,
                                                 const FunctionClass& cls) {
  details::check_prior(prior);
  details::check_class(exp, cls);
  VariationalResult best{-kInf, 0};
  for (std::size_t j = 0; j < cls.size(); ++j) {
    double gap = details::signed_mean_gap(exp, prior, cls[j]);
    if (!cls.symmetric()) gap = std::abs(gap);
    if (2.0 * gap > best.value) best = {2.0 * gap, j};
  }
  return best;
}

/*
 * Minimum over the class of the risk of the linear loss 1 - y r,
 *   pi E_P (1 - r) + (1 - pi) E_Q (1 + r).
 */
inline VariationalResult linear_loss_risk(const BinaryExperiment& exp, double prior,
                                          const FunctionClass& cls) {
  details::check_prior(prior);
  details::check_class(exp, cls);
  if (!cls.symmetric()) throw ArgumentError("linear loss risk needs a class symmetric about zero");
  VariationalResult best{kInf, 0};
  for (std::size_t j = 0; j < cls.size(); ++j) {
    double risk = 0.0;
    for (std::size_t i = 0; i < exp.size(); ++i) {
      risk += prior * exp.p(i) * (1.0 - cls[j][i]) + (1.0 - prior) * exp.q(i) * (1.0 + cls[j][i]);
    }
    if (risk < best.value) best = {risk, j};
  }
  return best;
}

/*
 * Minimum cost-weighted 0-1 risk of the classifiers (sgn r + 1) / 2; for a
 * sign-closed symmetric class this is 1/2 - V/4.
 */
inline double restricted_01_risk(const BinaryExperiment& exp, double prior,
                                 const FunctionClass& cls) {
  details::check_prior(prior);
  details::check_class(exp, cls);
  if (!cls.symmetric() || !cls.sign_closed()) {
    throw ArgumentError("restricted 0-1 risk needs a symmetric sign-closed class");
  }
  const FunctionClass unit([&] {
    std::vector<std::vector<double>> fs;
    for (const auto& r : cls.functions()) {
      std::vector<double> s(r.size());
      std::transform(r.begin(), r.end(), s.begin(), [](double v) { return v > 0.0 ? 1.0 : -1.0; });
      fs.push_back(std::move(s));
    }
    return fs;
  }(), 1.0, true);
  return 0.5 - 0.25 * generalized_variational(exp, prior, unit).value;
}

/*
 * Labelled sample with a Gram matrix. The matrix must be symmetric and
 * positive semidefinite up to an eigenvalue tolerance of 1e-8.
 */
class KernelSample {
 public:
  KernelSample(std::vector<int> labels, Eigen::MatrixXd gram)
      : labels_(std::move(labels)), gram_(std::move(gram)) {
    const auto m = static_cast<Eigen::Index>(labels_.size());
    if (m == 0) throw ArgumentError("kernel sample is empty");
    if (gram_.rows() != m || gram_.cols() != m) {
      throw ShapeError("kernel matrix must be " + std::to_string(m) + "x" + std::to_string(m));
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] != 1 && labels_[i] != -1) {
        throw DomainError("label " + std::to_string(i) + " must be -1 or +1");
      }
    }
    const double scale = std::max(1.0, gram_.cwiseAbs().maxCoeff());
    if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw DomainError("kernel matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-8) {
      throw DomainError("kernel matrix is not positive semidefinite");
    }
  }

  // Gram matrix of explicit feature rows.
  static KernelSample linear(std::vector<int> labels, const Eigen::MatrixXd& features) {
    return KernelSample(std::move(labels), features * features.transpose());
  }

  static KernelSample rbf(std::vector<int> labels, const Eigen::MatrixXd& features, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("rbf width must be positive");
    const Eigen::Index m = features.rows();
    Eigen::MatrixXd k(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        k(i, j) = std::exp(-(features.row(i) - features.row(j)).squaredNorm() / (2.0 * sigma * sigma));
      }
    }
    return KernelSample(std::move(labels), k);
  }

  const std::vector<int>& labels() const { return labels_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t positives() const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
  }

 private:
  std::vector<int> labels_;
  Eigen::MatrixXd gram_;
};

/*
 * J(alpha) = sum_ij alpha_i alpha_j y_i y_j K_ij. Without weights every
 * point gets 1/m. Custom weights must be nonnegative with class sums
 * m+/m and m-/m.
 */
inline double mmd_biased(const KernelSample& sample,
                         const std::optional<std::vector<double>>& weights = std::nullopt) {
  const std::size_t m = sample.size();
  Eigen::VectorXd a(static_cast<Eigen::Index>(m));
  if (weights) {
    if (weights->size() != m) throw ShapeError("weight vector length differs from sample size");
    double pos = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = (*weights)[i];
      if (!(v >= 0.0)) throw DomainError("weight " + std::to_string(i) + " is negative");
      (sample.labels()[i] == 1 ? pos : neg) += v;
    }
    const double mp = static_cast<double>(sample.positives()) / m;
    if (std::abs(pos - mp) > 1e-12 || std::abs(neg - (1.0 - mp)) > 1e-12) {
      throw DomainError("weights must sum to the class proportions");
    }
    for (std::size_t i = 0; i < m; ++i) a(static_cast<Eigen::Index>(i)) = (*weights)[i];
  } else {
    a.setConstant(1.0 / static_cast<double>(m));
  }
  for (std::size_t i = 0; i < m; ++i) {
    a(static_cast<Eigen::Index>(i)) *= sample.labels()[i];
  }
  const double j = a.dot(sample.gram() * a);
  if (j < -1e-9) throw NumericError("negative kernel discrepancy");
  return std::max(0.0, j);
}

struct HullComparison {
  double class_value;
  double hull_value;
};

/*
 * The functional of the class compared with its maximum over elements of
 * the absolute convex hull, sum_j c_j r_j with sum_j |c_j| <= 1. The
 * vertices +-r_j are always included.
 */
inline HullComparison aco_hull_invariance(const BinaryExperiment& exp, double prior,
                                          const FunctionClass& cls,
                                          const std::vector<std::vector<double>>& coefficients) {
  const double v_class = generalized_variational(exp, prior, cls).value;
  std::vector<std::vector<double>> hull;
  for (const auto& c : coefficients) {
    if (c.size() != cls.size()) throw ShapeError("coefficient vector length differs from class size");
    double norm = 0.0;
    for (double x : c) norm += std::abs(x);
    if (norm > 1.0 + 1e-12) throw DomainError("hull coefficients must have absolute sum <= 1");
    std::vector<double> r(exp.size(), 0.0);
    for (std::size_t j = 0; j < cls.size(); ++j) {
      for (std::size_t i = 0; i < exp.size(); ++i) r[i] += c[j] * cls[j][i];
    }
    hull.push_back(std::move(r));
  }
  for (const auto& r : cls.functions()) hull.push_back(r);
  const FunctionClass closed = FunctionClass(std::move(hull), cls.bound()).close_under_negation();
  return {v_class, generalized_variational(exp, prior, closed).value};
}

namespace details {

/*
 * Maximizes a concave function on [lo, hi] (either end may be infinite) by
 * doubling steps away from a start point, then golden section.
 */
template <typename F>
Extremum maximize_concave(F&& phi, double lo, double hi) {
  double x0 = std::clamp(0.0, lo, hi);
  if (!std::isfinite(x0)) x0 = std::isfinite(lo) ? lo : hi;
  double step = 1.0;
  const double v0 = phi(x0);
  double a = x0, b = x0;
  const double right = std::min(hi, x0 + step);
  if (right > x0 && phi(right) > v0) {
    // climb to the right
    double prev = x0;
    double cur = right;
    double vcur = phi(cur);
    for (int i = 0; i < 200; ++i) {
      step *= 2.0;
      const double next = std::min(hi, cur + step);
      if (next == cur) break;
      const double vn = phi(next);
      if (!(vn > vcur)) {
        a = prev;
        b = next;
        break;
      }
      prev = cur;
      cur = next;
      vcur = vn;
      a = prev;
      b = cur;
    }
  } else {
    double prev = right;
    double cur = x0;
    double vcur = v0;
    for (int i = 0; i < 200; ++i) {
      const double next = std::max(lo, cur - step);
      step *= 2.0;
      if (next == cur) {
        a = cur;
        b = prev;
        break;
      }
      const double vn = phi(next);
      if (!(vn > vcur)) {
        a = next;
        b = prev;
        break;
      }
      prev = cur;
      cur = next;
      vcur = vn;
      a = cur;
      b = prev;
    }
  }
  if (!(a < b)) return {x0, v0};
  return golden_max(phi, a, b, 1e-13);
}

inline void check_values(const BinaryExperiment& exp, const std::vector<double>& rho) {
  if (rho.size() != exp.size()) throw ShapeError("class function length differs from support");
}

}  // namespace details

/*
 * max_rho sum_i rho_i p_i - f*(rho_i) q_i over a finite class. Members with
 * an infinite conjugate value are excluded.
 */
inline VariationalResult variational_f_divergence(const BinaryExperiment& exp,
                                                  const ConvexFunction& f,
                                                  const std::vector<std::vector<double>>& cls) {
  if (cls.empty()) throw ArgumentError("function class is empty");
  VariationalResult best{-kInf, 0};
  for (std::size_t j = 0; j < cls.size(); ++j) {
    details::check_values(exp, cls[j]);
    double acc = 0.0;
    for (std::size_t i = 0; i < exp.size(); ++i) {
      const double c = lf_conjugate_eval(f, cls[j][i]);
      if (std::isinf(c) && exp.q(i) > 0.0) {
        acc = -kInf;
        break;
      }
      acc += cls[j][i] * exp.p(i) - mul0inf(exp.q(i), c);
    }
    if (acc > best.value) best = {acc, j};
  }
  if (!(best.value > -kInf)) throw InfeasibleError("every class member has an infinite conjugate");
  return best;
}

/*
 * The same supremum with every function allowed, solved outcome by outcome.
 * This equals sum_i q_i f(p_i / q_i), which is the divergence plus f(1).
 */
inline double variational_f_divergence(const BinaryExperiment& exp, const ConvexFunction& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double p = exp.p(i), q = exp.q(i);
    if (p == 0.0 && q == 0.0) continue;
    if (p == 0.0) {
      total += q * f.limit_at_zero;
      continue;
    }
    if (q == 0.0) {
      total = total + mul0inf(p, f.slope_at_infinity);
      continue;
    }
    auto phi = [&](double rho) {
      const double c = lf_conjugate_eval(f, rho);
      return std::isinf(c) ? -kInf : rho * p - q * c;
    };
    total += details::maximize_concave(phi, -kInf, f.slope_at_infinity).value;
  }
  return total;
}

/*
 * max_rho sum_i -f*(rho_i) q_i - g*(-rho_i) p_i over a finite class.
 */
inline VariationalResult generalized_I_fg(const BinaryExperiment& exp, const ConvexFunction& f,
                                          const ConvexFunction& g,
                                          const std::vector<std::vector<double>>& cls) {
  if (cls.empty()) throw ArgumentError("function class is empty");
  VariationalResult best{-kInf, 0};
  for (std::size_t j = 0; j < cls.size(); ++j) {
    details::check_values(exp, cls[j]);
    double acc = 0.0;
    for (std::size_t i = 0; i < exp.size(); ++i) {
      const double cf = exp.q(i) > 0.0 ? lf_conjugate_eval(f, cls[j][i]) : 0.0;
      const double cg = exp.p(i) > 0.0 ? lf_conjugate_eval(g, -cls[j][i]) : 0.0;
      if (std::isinf(cf) || std::isinf(cg)) {
        acc = -kInf;
        break;
      }
      acc -= exp.q(i) * cf + exp.p(i) * cg;
    }
    if (acc > best.value) best = {acc, j};
  }
  if (!(best.value > -kInf)) throw InfeasibleError("every class member has an infinite conjugate");
  return best;
}

/*
 * Outcome-by-outcome version; equals sum_i q_i h(p_i / q_i) for the
 * infimal convolution h of f and g.
 */
inline double generalized_I_fg(const BinaryExperiment& exp, const ConvexFunction& f,
                               const ConvexFunction& g) {
  double total = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double p = exp.p(i), q = exp.q(i);
    if (p == 0.0 && q == 0.0) continue;
    auto phi = [&](double rho) {
      const double cf = q > 0.0 ? lf_conjugate_eval(f, rho) : 0.0;
      const double cg = p > 0.0 ? lf_conjugate_eval(g, -rho) : 0.0;
      if (std::isinf(cf) || std::isinf(cg)) return -kInf;
      return -q * cf - p * cg;
    };
    const double lo = p > 0.0 ? -g.slope_at_infinity : -kInf;
    const double hi = q > 0.0 ? f.slope_at_infinity : kInf;
    if (lo > hi) return kInf;
    const double v = details::maximize_concave(phi, lo, hi).value;
    if (v > 1e15) return kInf;
    total += v;
  }
  return total;
}

}  // namespace bexp

#endif  // BEXP_VARIATIONAL_HPP_
