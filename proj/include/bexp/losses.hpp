#ifndef BEXP_LOSSES_HPP_
#define BEXP_LOSSES_HPP_

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bexp/numeric.hpp"
#include "bexp/weight.hpp"

namespace bexp {

// A strictly monotone map from [0,1] to the reals together with its inverse.
struct LinkFunction {
  RealFn forward;
  RealFn inverse;
  double lower = -kInf;  // range of forward
  double upper = kInf;
};

/*
 * A proper loss generated by a weight w on (0,1). W and Wbar are the first
 * and second antiderivatives of w, anchored at 1/2.
 */
class ProperLoss {
 public:
  ProperLoss(std::string name, WeightFunction w, Antiderivatives anti,
             std::optional<LinkFunction> canonical = std::nullopt)
      : name_(std::move(name)), w_(std::move(w)), anti_(std::move(anti)),
        canonical_(std::move(canonical)) {}

  // A loss whose antiderivatives are computed by quadrature.
  static ProperLoss from_weight(std::string name, const WeightFunction& w) {
    return ProperLoss(std::move(name), w, Antiderivatives::of(w));
  }

  const std::string& name() const { return name_; }
  const WeightFunction& weight() const { return w_; }
  const Antiderivatives& antiderivatives() const { return anti_; }

  double W(double x) const { return anti_.first(x); }
  double Wbar(double x) const { return anti_.second(x); }

  ProperLoss with_antiderivatives(Antiderivatives anti) const {
    return ProperLoss(name_, w_, std::move(anti), canonical_);
  }

  // The link W with its inverse; the inverse is computed by bisection when no
  // closed form was supplied.
  LinkFunction canonical_link() const {
    if (canonical_) return *canonical_;
    if (!w_.atoms().empty() || !w_.has_smooth()) {
      throw DomainError("canonical link requires a strictly increasing W");
    }
    for (int k = 1; k < 100; ++k) {
      if (!(W(k / 100.0) < W((k + 1) / 100.0))) {
        throw DomainError("canonical link requires a strictly increasing W");
      }
    }
    auto self = std::make_shared<ProperLoss>(*this);
    LinkFunction link;
    link.forward = [self](double c) { return self->W(c); };
    link.lower = W(0.0);
    link.upper = W(1.0);
    link.inverse = [self](double h) {
      return bisect_increasing([&](double c) { return self->W(c); }, h, 0.0, 1.0);
    };
    return link;
  }

 private:
  std::string name_;
  WeightFunction w_;
  Antiderivatives anti_;
  std::optional<LinkFunction> canonical_;
};

namespace details {

inline void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " must lie in [0,1]");
}

inline void check_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError(std::string(what) + " must lie in (0,1)");
}

inline void check_label(int y) {
  if (y != 1 && y != -1) throw DomainError("label must be -1 or +1");
}

}  // namespace details

inline double cost_loss(double c, int y, double estimate) {
  details::check_open_unit(c, "cost");
  details::check_label(y);
  if (y == -1) return estimate >= c ? c : 0.0;
  return estimate < c ? 1.0 - c : 0.0;
}

// A loss given as a callable of (label, estimate).
using LossCallable = std::function<double(int, double)>;

inline double pointwise_risk(const LossCallable& loss, double eta, double estimate) {
  return mul0inf(1.0 - eta, loss(-1, estimate)) + mul0inf(eta, loss(1, estimate));
}

inline double min_cost_risk(double c, double eta) {
  return std::min((1.0 - eta) * c, (1.0 - c) * eta);
}

inline double partial_loss(const ProperLoss& loss, int y, double estimate) {
  details::check_label(y);
  details::check_unit(estimate, "estimate");
  const double wb0 = loss.Wbar(0.0), wb1 = loss.Wbar(1.0);
  if (std::isinf(wb0) || std::isinf(wb1)) {
    throw DomainError("loss '" + loss.name() + "' has an infinite endpoint risk");
  }
  if (y == 1) {
    if (estimate == 1.0) return 0.0;
    return wb1 - loss.Wbar(estimate) - mul0inf(1.0 - estimate, loss.W(estimate));
  }
  if (estimate == 0.0) return 0.0;
  return mul0inf(estimate, loss.W(estimate)) - loss.Wbar(estimate) + wb0;
}

/*
 * L(eta, estimate) = -Wbar(e) + W(e)(e - eta) + eta (Wbar(1) - Wbar(0)) + Wbar(0)
 */
inline double conditional_risk(const ProperLoss& loss, double eta, double estimate) {
  details::check_unit(eta, "eta");
  details::check_unit(estimate, "estimate");
  if (estimate == 0.0 || estimate == 1.0) {
    return mul0inf(1.0 - eta, partial_loss(loss, -1, estimate)) +
           mul0inf(eta, partial_loss(loss, 1, estimate));
  }
  const double wb0 = loss.Wbar(0.0), wb1 = loss.Wbar(1.0);
  if (std::isinf(wb0) || std::isinf(wb1)) {
    throw DomainError("loss '" + loss.name() + "' has an infinite endpoint risk");
  }
  return -loss.Wbar(estimate) + loss.W(estimate) * (estimate - eta) + eta * (wb1 - wb0) + wb0;
}

inline double bayes_risk(const ProperLoss& loss, double eta) {
  details::check_unit(eta, "eta");
  const double wb0 = loss.Wbar(0.0), wb1 = loss.Wbar(1.0);
  if (std::isinf(wb0) || std::isinf(wb1)) {
    throw DomainError("loss '" + loss.name() + "' has an infinite endpoint risk");
  }
  return -loss.Wbar(eta) + eta * (wb1 - wb0) + wb0;
}

// Wbar(eta) - Wbar(e) - (eta - e) W(e).
inline double regret(const ProperLoss& loss, double eta, double estimate) {
  details::check_unit(eta, "eta");
  details::check_unit(estimate, "estimate");
  if (eta == estimate) return 0.0;
  const double v =
      loss.Wbar(eta) - loss.Wbar(estimate) - mul0inf(eta - estimate, loss.W(estimate));
  return std::max(0.0, v);
}

inline double regret_cost(double c, double eta, double estimate) {
  const double lo = std::min(eta, estimate), hi = std::max(eta, estimate);
  return (lo < c && c <= hi) ? std::abs(eta - c) : 0.0;
}

/*
 * Loss weight from a concave Bayes risk: w = -L''.
 */
inline WeightFunction weight_from_bayes_risk(const RealFn& bayes) {
  auto w = [bayes](double c) {
    const double h = unit_interval_step(c);
    return -second_derivative(bayes, c, h);
  };
  for (int k = 1; k < 100; ++k) {
    const double c = k / 100.0;
    const double v = w(c);
    if (v < -1e-6 * (1.0 + std::abs(v))) {
      throw ShapeError("Bayes risk is not concave near c = " + std::to_string(c));
    }
  }
  return WeightFunction([w](double c) { return std::max(0.0, w(c)); });
}

// Conditional risk of the estimate W^{-1}(h) under a link.
inline double composite_loss(const ProperLoss& loss, const LinkFunction& link, double eta,
                             double h) {
  if (!(h >= link.lower && h <= link.upper) || std::isnan(h)) {
    throw DomainError("link value outside the range of the link");
  }
  return conditional_risk(loss, eta, link.inverse(h));
}

/*
 * Composite loss through the canonical link written with the convex
 * conjugate of Wbar: Wbar*(h) - eta h + eta (Wbar(1) - Wbar(0)) + Wbar(0).
 */
inline double composite_loss_canonical(const ProperLoss& loss, double eta, double h) {
  const LinkFunction link = loss.canonical_link();
  if (!(h > link.lower && h < link.upper)) {
    throw DomainError("link value outside the range of W");
  }
  const double e = link.inverse(h);
  const double conj = h * e - loss.Wbar(e);
  return conj - eta * h + eta * (loss.Wbar(1.0) - loss.Wbar(0.0)) + loss.Wbar(0.0);
}

struct DualPair {
  double lhs;
  double rhs;
};

/*
 * Regret as a Bregman divergence of Wbar, and the same number computed from
 * the conjugate with arguments mapped through W and swapped.
 */
inline DualPair bregman_dual_check(const ProperLoss& loss, double x, double y) {
  details::check_open_unit(x, "x");
  details::check_open_unit(y, "y");
  const LinkFunction link = loss.canonical_link();
  auto conj = [&](double h) {
    const double e = link.inverse(h);
    return h * e - loss.Wbar(e);
  };
  const double lhs = loss.Wbar(x) - loss.Wbar(y) - (x - y) * loss.W(y);
  const double hx = loss.W(x), hy = loss.W(y);
  const double rhs = conj(hy) - conj(hx) - (hy - hx) * link.inverse(hx);
  return {lhs, rhs};
}

namespace losses {

inline ProperLoss square() {
  Antiderivatives anti([](double c) { return 2.0 * c - 1.0; },
                       [](double c) { return (c - 0.5) * (c - 0.5); },
                       {-1.0, 1.0, 0.25, 0.25});
  LinkFunction link{[](double c) { return 2.0 * c - 1.0; },
                    [](double h) { return 0.5 * (h + 1.0); }, -1.0, 1.0};
  return ProperLoss("square", WeightFunction([](double) { return 2.0; }), anti, link);
}

inline ProperLoss log() {
  const double ln2 = std::log(2.0);
  Antiderivatives anti([](double c) { return std::log(c / (1.0 - c)); },
                       [ln2](double c) { return xlogx(c) + xlogx(1.0 - c) + ln2; },
                       {-kInf, kInf, ln2, ln2});
  LinkFunction link{[](double c) { return std::log(c / (1.0 - c)); },
                    [](double h) { return 1.0 / (1.0 + std::exp(-h)); }};
  return ProperLoss("log", WeightFunction([](double c) { return 1.0 / (c * (1.0 - c)); }),
                    anti, link);
}

inline ProperLoss exponential() {
  Antiderivatives anti([](double c) { return (2.0 * c - 1.0) / std::sqrt(c * (1.0 - c)); },
                       [](double c) { return 1.0 - 2.0 * std::sqrt(c * (1.0 - c)); },
                       {-kInf, kInf, 1.0, 1.0});
  LinkFunction link{[](double c) { return (2.0 * c - 1.0) / std::sqrt(c * (1.0 - c)); },
                    [](double h) { return 0.5 + h / (2.0 * std::sqrt(h * h + 4.0)); }};
  return ProperLoss(
      "exp",
      WeightFunction([](double c) {
        const double v = c * (1.0 - c);
        return 1.0 / (2.0 * v * std::sqrt(v));
      }),
      anti, link);
}

// The half-logit link under which the exponential loss is exp(-y h).
inline LinkFunction exponential_natural_link() {
  return {[](double c) { return 0.5 * std::log(c / (1.0 - c)); },
          [](double h) { return 1.0 / (1.0 + std::exp(-2.0 * h)); }};
}

inline ProperLoss truncated_quadratic() {
  Antiderivatives anti([](double c) { return 8.0 * c - 4.0; },
                       [](double c) { return 4.0 * (c - 0.5) * (c - 0.5); },
                       {-4.0, 4.0, 1.0, 1.0});
  LinkFunction link{[](double c) { return 8.0 * c - 4.0; },
                    [](double h) { return (h + 4.0) / 8.0; }, -4.0, 4.0};
  return ProperLoss("tq", WeightFunction([](double) { return 8.0; }), anti, link);
}

inline ProperLoss zero_one() {
  const auto w = WeightFunction::atoms_only({{0.5, 2.0}});
  return ProperLoss("zero_one", w, Antiderivatives::of(w));
}

inline ProperLoss cost(double c0) {
  details::check_open_unit(c0, "cost");
  const auto w = WeightFunction::atoms_only({{c0, 1.0}});
  return ProperLoss("cost:" + std::to_string(c0), w, Antiderivatives::of(w));
}

}  // namespace losses

// Builtin loss by name: square, log, exp, tq, zero_one or cost:<c0>.
inline ProperLoss builtin_loss(const std::string& name) {
  if (name == "square") return losses::square();
  if (name == "log") return losses::log();
  if (name == "exp" || name == "exponential") return losses::exponential();
  if (name == "tq" || name == "truncated_quadratic") return losses::truncated_quadratic();
  if (name == "zero_one") return losses::zero_one();
  if (name.rfind("cost:", 0) == 0) {
    double c0 = 0.0;
    try {
      std::size_t used = 0;
      c0 = std::stod(name.substr(5), &used);
      if (used != name.size() - 5) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ArgumentError("malformed cost loss '" + name + "'");
    }
    return losses::cost(c0);
  }
  throw ArgumentError("unknown loss '" + name + "'");
}

}  // namespace bexp

#endif  // BEXP_LOSSES_HPP_
