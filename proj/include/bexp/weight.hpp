#ifndef BEXP_WEIGHT_HPP_
#define BEXP_WEIGHT_HPP_

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bexp/numeric.hpp"

namespace bexp {

// A point mass of the weight measure.
struct Atom {
  double location;
  double mass;
};

/*
 * A nonnegative measure on (0,1): an optional smooth density plus point
 * masses. Used both for divergence weights and for loss weights.
 * `breakpoints` lists interior points where the density is not smooth.
 */
class WeightFunction {
 public:
  WeightFunction() = default;

  explicit WeightFunction(RealFn smooth, std::vector<Atom> atoms = {},
                          std::vector<double> breakpoints = {})
      : smooth_(std::move(smooth)),
        atoms_(std::move(atoms)),
        breakpoints_(std::move(breakpoints)) {
    validate();
  }

  static WeightFunction atoms_only(std::vector<Atom> atoms) {
    WeightFunction w;
    w.atoms_ = std::move(atoms);
    w.validate();
    return w;
  }

  bool has_smooth() const { return static_cast<bool>(smooth_); }

  double smooth(double x) const { return smooth_ ? smooth_(x) : 0.0; }

  double operator()(double x) const { return smooth(x); }

  const std::vector<Atom>& atoms() const { return atoms_; }

  const std::vector<double>& breakpoints() const { return breakpoints_; }

  const RealFn& density() const { return smooth_; }

 private:
  void validate() {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const Atom& a = atoms_[i];
      if (!(a.location > 0.0 && a.location < 1.0)) {
        throw DomainError("weight atom location must lie in (0,1)");
      }
      if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
        throw DomainError("weight atom mass must be positive and finite");
      }
      if (i > 0 && !(atoms_[i - 1].location < a.location)) {
        throw DomainError("weight atom locations must be distinct");
      }
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::remove_if(breakpoints_.begin(), breakpoints_.end(),
                                      [](double b) { return !(b > 0.0 && b < 1.0); }),
                       breakpoints_.end());
  }

  RealFn smooth_;
  std::vector<Atom> atoms_;
  std::vector<double> breakpoints_;
};

// Integral of g over [a, b] split at the breakpoints that fall inside.
template <typename G>
double integrate_pieces(G&& g, double a, double b, const std::vector<double>& cuts,
                        double tol = 1e-12) {
  if (a == b) return 0.0;
  if (a > b) return -integrate_pieces(g, b, a, cuts, tol);
  double total = 0.0, left = a;
  for (double c : cuts) {
    if (c > left && c < b) {
      total += integrate(g, left, c, tol);
      left = c;
    }
  }
  return total + integrate(g, left, b, tol);
}

/*
 * First and second antiderivatives of a weight, both vanishing at 1/2.
 * first(x) = int_{1/2}^x w, second(x) = int_{1/2}^x first.
 * Endpoint values are limits and may be infinite.
 */
class Antiderivatives {
 public:
  struct Endpoints {
    double first_at_0;
    double first_at_1;
    double second_at_0;
    double second_at_1;
  };

  Antiderivatives(RealFn first, RealFn second, Endpoints ends)
      : first_(std::move(first)), second_(std::move(second)), ends_(ends) {}

  // Numerical antiderivatives of an arbitrary weight.
  static Antiderivatives of(const WeightFunction& w) {
    auto shared = std::make_shared<WeightFunction>(w);
    auto first = [shared](double x) { return numeric_first(*shared, x); };
    auto second = [shared](double x) { return numeric_second(*shared, x); };
    Endpoints e{};
    const RealFn& dens = w.density();
    const auto& cuts = w.breakpoints();
    if (dens) {
      RealFn t_dens = [&](double t) { return t * dens(t); };
      RealFn u_dens = [&](double t) { return (1.0 - t) * dens(t); };
      e.first_at_0 = integrable_near(dens, 0.0, 1)
                         ? -endpoint_integral(dens, 0.0, 0.5, cuts)
                         : -kInf;
      e.first_at_1 = integrable_near(dens, 1.0, -1)
                         ? endpoint_integral(dens, 0.5, 1.0, cuts)
                         : kInf;
      e.second_at_0 = integrable_near(t_dens, 0.0, 1)
                          ? endpoint_integral(t_dens, 0.0, 0.5, cuts)
                          : kInf;
      e.second_at_1 = integrable_near(u_dens, 1.0, -1)
                          ? endpoint_integral(u_dens, 0.5, 1.0, cuts)
                          : kInf;
    }
    for (const Atom& a : w.atoms()) {
      e.first_at_0 += atom_first(a, 0.0);
      e.first_at_1 += atom_first(a, 1.0);
      e.second_at_0 += atom_second(a, 0.0);
      e.second_at_1 += atom_second(a, 1.0);
    }
    return Antiderivatives(std::move(first), std::move(second), e);
  }

  double first(double x) const {
    if (x <= 0.0) return ends_.first_at_0;
    if (x >= 1.0) return ends_.first_at_1;
    return first_(x);
  }

  double second(double x) const {
    if (x <= 0.0) return ends_.second_at_0;
    if (x >= 1.0) return ends_.second_at_1;
    return second_(x);
  }

  const Endpoints& endpoints() const { return ends_; }

  // Adds k1 to the first antiderivative and k1*x + k2 to the second.
  Antiderivatives shifted(double k1, double k2) const {
    auto f = first_;
    auto s = second_;
    Endpoints e = ends_;
    e.first_at_0 += k1;
    e.first_at_1 += k1;
    e.second_at_0 += k2;
    e.second_at_1 += k1 + k2;
    return Antiderivatives([f, k1](double x) { return f(x) + k1; },
                           [s, k1, k2](double x) { return s(x) + k1 * x + k2; }, e);
  }

  static double atom_first(const Atom& a, double x) {
    return a.mass * (step(x - a.location) - step(0.5 - a.location));
  }

  static double atom_second(const Atom& a, double x) {
    return a.mass * (positive_part(x - a.location) - positive_part(0.5 - a.location) -
                     (x - 0.5) * step(0.5 - a.location));
  }

 private:
  static double endpoint_integral(const RealFn& g, double a, double b,
                                  const std::vector<double>& cuts) {
    // the singular behaviour is confined to the outermost smooth piece
    if (a == 0.0) {
      double m = 0.25;
      if (!cuts.empty() && cuts.front() < m) m = cuts.front();
      return integrate_singular(g, 0.0, m) + integrate_pieces(g, m, b, cuts);
    }
    double m = 0.75;
    if (!cuts.empty() && cuts.back() > m) m = cuts.back();
    return integrate_pieces(g, a, m, cuts) + integrate_singular(g, m, 1.0);
  }

  static double numeric_first(const WeightFunction& w, double x) {
    double v = 0.0;
    if (w.has_smooth()) {
      const RealFn& d = w.density();
      v = integrate_pieces(d, 0.5, x, w.breakpoints());
    }
    for (const Atom& a : w.atoms()) v += atom_first(a, x);
    return v;
  }

  static double numeric_second(const WeightFunction& w, double x) {
    double v = 0.0;
    if (w.has_smooth()) {
      const RealFn& d = w.density();
      v = integrate_pieces([&](double t) { return (x - t) * d(t); }, 0.5, x,
                           w.breakpoints());
    }
    for (const Atom& a : w.atoms()) v += atom_second(a, x);
    return v;
  }

  RealFn first_;
  RealFn second_;
  Endpoints ends_;
};

}  // namespace bexp

#endif  // BEXP_WEIGHT_HPP_
