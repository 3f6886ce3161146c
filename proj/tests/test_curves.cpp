#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace bexp;

namespace {

std::vector<double> unit_grid(int count) {
  std::vector<double> g;
  for (int k = 1; k < count; ++k) g.push_back(static_cast<double>(k) / count);
  return g;
}

// closed-form Neyman-Pearson curve of g pi (1 - pi)
double beta_gamma_oracle(double g, double alpha) {
  if (alpha >= g) return 1.0;
  const double d = std::sqrt(g) - std::sqrt(alpha);
  return 1.0 - d * d;
}

RealFn bayes_of(const BinaryExperiment& e) {
  return [e](double pi) { return pi >= 1.0 ? 0.0 : bayes_risk_01(pi, e); };
}

double interpolate(const CurvePoints& c, double x) {
  for (std::size_t i = 1; i < c.x.size(); ++i) {
    if (x <= c.x[i]) {
      const double t = (x - c.x[i - 1]) / (c.x[i] - c.x[i - 1]);
      return c.y[i - 1] + t * (c.y[i] - c.y[i - 1]);
    }
  }
  return c.y.back();
}

/*
 * Mixtures of g pi (1 - pi)(1 + b (2 pi - 1)) with |b| <= 0.3 and g <= 0.7:
 * concave, zero at both ends, slopes within [-1, 1].
 */
struct CubicMix {
  std::vector<double> weight, g, b;
  double value(double x) const {
    double r = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) r += weight[k] * g[k] * x * (1.0 - x) * (1.0 + b[k] * (2.0 * x - 1.0));
    return r;
  }
  double derivative(double x) const {
    double r = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      r += weight[k] * g[k] * ((1.0 - b[k]) + 2.0 * (3.0 * b[k] - 1.0) * x - 6.0 * b[k] * x * x);
    }
    return r;
  }
};

CubicMix random_mix(std::mt19937_64& rng) {
  CubicMix m;
  const std::size_t terms = fixtures::random_size(rng, 1, 3);
  m.weight = fixtures::random_simplex(rng, terms);
  for (std::size_t k = 0; k < terms; ++k) {
    m.g.push_back(fixtures::uniform(rng, 0.1, 0.7));
    m.b.push_back(fixtures::uniform(rng, -0.3, 0.3));
  }
  return m;
}

}  // namespace

TEST(RiskCurve, ThreePointExample) {
  const Task t(0.5, BinaryExperiment({0.5, 0.3, 0.2}, {0.1, 0.3, 0.6}));
  const CurvePoints c = risk_curve(t, {0.9, 0.5, 0.2}, {0.1, 0.4, 0.6});
  EXPECT_EQ(c.kind, CurveKind::risk_vs_cost);
  ASSERT_EQ(c.y.size(), 3u);
  EXPECT_NEAR(c.y[0], 0.05, 1e-15);
  EXPECT_NEAR(c.y[1], 0.14, 1e-15);
  EXPECT_NEAR(c.y[2], 0.13, 1e-15);
}

TEST(RiskCurve, PerfectEstimateOnSeparatedExperimentIsZero) {
  const Task t(0.3, BinaryExperiment({0.6, 0.4, 0.0}, {0.0, 0.0, 1.0}));
  for (double r : risk_curve(t, posterior_estimate(t), unit_grid(50)).y) EXPECT_EQ(r, 0.0);
}

TEST(RiskCurve, PosteriorMinorizesEveryEstimate) {
  std::mt19937_64 rng(211);
  const auto costs = unit_grid(100);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = fixtures::random_size(rng, 2, 8);
    const Task t(fixtures::uniform(rng, 0.05, 0.95), fixtures::random_experiment(rng, n, 0.0));
    const auto eta = posterior_estimate(t);
    const CurvePoints best = risk_curve(t, eta, costs);
    std::vector<double> other(n);
    for (double& e : other) e = fixtures::uniform(rng, 0.0, 1.0);
    const CurvePoints worse = risk_curve(t, other, costs);
    for (std::size_t i = 0; i < costs.size(); ++i) {
      EXPECT_LE(best.y[i], worse.y[i] + 1e-12);
      // pointwise Bayes oracle: sum of min((1 - pi) q c, pi p (1 - c))
      double oracle = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        oracle += std::min((1.0 - t.prior()) * t.experiment().q(j) * costs[i],
                           t.prior() * t.experiment().p(j) * (1.0 - costs[i]));
      }
      EXPECT_NEAR(best.y[i], oracle, 1e-15);
    }
  }
}

TEST(RiskCurve, RejectsBadInputs) {
  const Task t(0.5, BinaryExperiment({0.5, 0.5}, {0.2, 0.8}));
  EXPECT_THROW(risk_curve(t, {0.5}, {0.5}), ArgumentError);
  EXPECT_THROW(risk_curve(t, {0.5, 1.5}, {0.5}), DomainError);
  EXPECT_THROW(risk_curve(t, {0.5, 0.5}, {0.5, 0.5}), DomainError);
}

TEST(Roc, Examples) {
  const BinaryExperiment same({0.3, 0.7}, {0.3, 0.7});
  EXPECT_NEAR(auc(roc_curve(same, {0.1, 0.9})), 0.5, 1e-15);
  EXPECT_NEAR(auc(roc_curve(same, likelihood_ratio_score(same))), 0.5, 1e-15);
  const BinaryExperiment e({0.8, 0.2}, {0.2, 0.8});
  const CurvePoints roc = roc_curve(e, likelihood_ratio_score(e));
  EXPECT_EQ(roc.kind, CurveKind::roc);
  ASSERT_EQ(roc.x.size(), 3u);
  EXPECT_NEAR(roc.x[1], 0.2, 1e-15);
  EXPECT_NEAR(roc.y[1], 0.8, 1e-15);
  EXPECT_NEAR(auc(roc), 0.8, 1e-15);
}

TEST(Roc, LikelihoodRatioDominates) {
  std::mt19937_64 rng(223);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = fixtures::random_size(rng, 2, 8);
    const auto e = fixtures::random_experiment(rng, n, 0.0);
    const CurvePoints lr = roc_curve(e, likelihood_ratio_score(e));
    std::vector<double> score(n);
    for (double& s : score) s = fixtures::uniform(rng, -1.0, 1.0);
    const CurvePoints other = roc_curve(e, score);
    for (std::size_t i = 0; i < other.x.size(); ++i) {
      EXPECT_LE(other.y[i], interpolate(lr, other.x[i]) + 1e-12);
      EXPECT_LE(other.y[i], neyman_pearson_beta(e, other.x[i]) + 1e-12);
    }
    const double a = auc(lr);
    EXPECT_GE(a, 0.5 - 1e-12);
    EXPECT_LE(a, 1.0 + 1e-12);
    EXPECT_GE(a, auc(other) - 1e-12);
    for (std::size_t i = 1; i < lr.x.size(); ++i) {
      EXPECT_LT(lr.x[i - 1], lr.x[i]);
      EXPECT_LE(lr.y[i - 1], lr.y[i]);
    }
  }
}

TEST(Conversion, MinRiskFromBetaExamples) {
  const RealFn diagonal = [](double a) { return a; };
  const RealFn one = [](double) { return 1.0; };
  const RealFn half = [](double a) { return beta_gamma_oracle(0.5, a); };
  for (double pi = 0.05; pi < 1.0; pi += 0.05) {
    EXPECT_NEAR(minLL_from_beta(diagonal, pi), std::min(pi, 1.0 - pi), 1e-12);
    EXPECT_EQ(minLL_from_beta(one, pi), 0.0);
    EXPECT_NEAR(minLL_from_beta(half, pi), 0.5 * pi * (1.0 - pi), 1e-9);
  }
  EXPECT_NEAR(minLL_from_beta(half, 0.5), 0.125, 1e-12);
}

TEST(Conversion, BetaFromMinRiskExamples) {
  const RealFn tent = [](double pi) { return std::min(pi, 1.0 - pi); };
  const RealFn zero = [](double) { return 0.0; };
  for (double a = 0.0; a <= 1.0 + 1e-12; a += 0.05) {
    EXPECT_NEAR(beta_from_minLL(tent, std::min(a, 1.0)), std::min(a, 1.0), 1e-9);
  }
  for (double a = 0.05; a <= 1.0 + 1e-12; a += 0.05) EXPECT_NEAR(beta_from_minLL(zero, std::min(a, 1.0)), 1.0, 1e-8);
  for (double g : {0.25, 0.5, 0.75}) {
    const RealFn quad = [g](double pi) { return g * pi * (1.0 - pi); };
    for (double a = 0.0; a <= 1.0 + 1e-12; a += 0.01) {
      const double alpha = std::min(a, 1.0);
      EXPECT_NEAR(beta_from_minLL(quad, alpha), beta_gamma_oracle(g, alpha), 1e-8) << g << " " << alpha;
      EXPECT_NEAR(beta_gamma_family(g, alpha), beta_gamma_oracle(g, alpha), 1e-14);
    }
  }
  EXPECT_THROW(beta_from_minLL(tent, 1.5), DomainError);
}

TEST(Conversion, ConsistentOnExperiments) {
  std::mt19937_64 rng(227);
  for (int k = 0; k < 50; ++k) {
    const auto e = fixtures::random_experiment(rng, fixtures::random_size(rng, 2, 8), 0.0);
    const RealFn bayes = bayes_of(e);
    const RealFn np = [e](double a) { return neyman_pearson_beta(e, a); };
    for (double a = 0.0; a <= 1.0 + 1e-12; a += 0.02) {
      const double alpha = std::min(a, 1.0);
      EXPECT_NEAR(beta_from_minLL(bayes, alpha), neyman_pearson_beta(e, alpha), 1e-8);
    }
    for (double pi = 0.02; pi < 0.99; pi += 0.02) {
      EXPECT_NEAR(minLL_from_beta(np, pi), bayes_risk_01(pi, e), 1e-9);
    }
  }
}

TEST(Conversion, OutputsAreWellShaped) {
  std::mt19937_64 rng(229);
  for (int k = 0; k < 20; ++k) {
    const auto e = fixtures::random_experiment(rng, fixtures::random_size(rng, 2, 8), 0.0);
    const RealFn bayes = bayes_of(e);
    const RealFn np = [e](double a) { return neyman_pearson_beta(e, a); };
    EXPECT_NEAR(beta_from_minLL(bayes, 1.0), 1.0, 1e-12);
    const double h = 0.02;
    for (double a = h; a + h <= 1.0 + 1e-12; a += h) {
      const double lo = beta_from_minLL(bayes, a - h), mid = beta_from_minLL(bayes, a),
                   hi = beta_from_minLL(bayes, std::min(a + h, 1.0));
      EXPECT_LE(lo, mid + 1e-12);
      EXPECT_GE(mid, 0.5 * (lo + hi) - 1e-9);
    }
    for (double pi = h; pi + h < 1.0; pi += h) {
      const double lo = minLL_from_beta(np, pi - h > 0.0 ? pi - h : 1e-3), mid = minLL_from_beta(np, pi),
                   hi = minLL_from_beta(np, pi + h);
      EXPECT_GE(mid, 0.0);
      EXPECT_LE(mid, std::min(pi, 1.0 - pi) + 1e-15);
      if (pi - h > 0.0) {
        EXPECT_GE(mid, 0.5 * (lo + hi) - 1e-9);
      }
    }
  }
}

TEST(ExplicitConversion, QuadraticFamily) {
  for (double g : {0.25, 0.5, 0.75}) {
    const SmoothCurve bayes{[g](double pi) { return g * pi * (1.0 - pi); },
                            [g](double pi) { return g * (1.0 - 2.0 * pi); }};
    // L - pi L' = g pi^2 and its capped inverse
    for (double pi = 0.0; pi <= 1.0; pi += 0.1) {
      EXPECT_NEAR(bayes.value(pi) - pi * bayes.derivative(pi), g * pi * pi, 1e-15);
    }
    const SmoothCurve beta{[g](double a) { return beta_gamma_oracle(g, a); },
                           [g](double a) { return a < g ? std::sqrt(g / a) - 1.0 : 0.0; }};
    double sup = 0.0;
    for (double a = 0.01; a <= 0.99 + 1e-12; a += 0.01) {
      const ConversionResult r = beta_explicit(bayes, a);
      EXPECT_FALSE(r.used_fallback);
      EXPECT_NEAR(r.value, beta_from_minLL(bayes.value, a), 1e-6);
      sup = std::max(sup, std::abs(r.value - beta_gamma_oracle(g, a)));
    }
    EXPECT_LE(sup, 1e-4) << g;
    for (double pi = 0.05; pi < 0.96; pi += 0.05) {
      const ConversionResult r = minLL_explicit(beta, pi);
      EXPECT_FALSE(r.used_fallback);
      EXPECT_NEAR(r.value, g * pi * (1.0 - pi), 1e-6) << g << " " << pi;
      EXPECT_NEAR(r.value, minLL_from_beta(beta.value, pi), 1e-6);
    }
  }
}

TEST(ExplicitConversion, AgreesWithOptimizationOnSmoothCurves) {
  std::mt19937_64 rng(233);
  for (int k = 0; k < 20; ++k) {
    const CubicMix m = random_mix(rng);
    const SmoothCurve bayes{[m](double x) { return m.value(x); }, [m](double x) { return m.derivative(x); }};
    for (double a = 0.02; a < 0.99; a += 0.04) {
      const ConversionResult r = beta_explicit(bayes, a);
      EXPECT_FALSE(r.used_fallback);
      EXPECT_NEAR(r.value, beta_from_minLL(bayes.value, a), 1e-6);
    }
  }
}

TEST(ExplicitConversion, FallsBackWhenDerivativeIsNotMonotone) {
  // beta' rises on part of the range, so it has no inverse
  const SmoothCurve wavy{[](double a) { return std::min(1.0, a + 0.1 * std::sin(3.0 * a) * (1.0 - a)); },
                         [](double a) { return 1.0 + 0.3 * std::cos(3.0 * a) * (1.0 - a) - 0.1 * std::sin(3.0 * a); }};
  const ConversionResult r = minLL_explicit(wavy, 0.4);
  EXPECT_TRUE(r.used_fallback);
  EXPECT_NEAR(r.value, minLL_from_beta(wavy.value, 0.4), 1e-15);
  // a convex risk curve gives a decreasing L - pi L'
  const SmoothCurve convex{[](double pi) { return 0.1 * pi * pi; }, [](double pi) { return 0.2 * pi; }};
  EXPECT_TRUE(beta_explicit(convex, 0.3).used_fallback);
}

TEST(Duality, Examples) {
  const CostLine line = cost_line_from_roc_point(0.2, 0.8, 0.5);
  for (double c = 0.0; c <= 1.0; c += 0.1) EXPECT_NEAR(line(c), 0.1, 1e-15);
  for (double pi : {0.2, 0.5, 0.7}) {
    for (double t : {0.0, 0.3, 1.0}) {
      const CostLine diag = cost_line_from_roc_point(t, t, pi);
      EXPECT_NEAR(diag(pi), pi * (1.0 - pi), 1e-15);
      for (double c = 0.0; c <= 1.0; c += 0.05) {
        EXPECT_GE(diag(c), std::min((1.0 - pi) * c, pi * (1.0 - c)) - 1e-15);
      }
    }
  }
  EXPECT_THROW(roc_line_from_cost_point(0.0, 0.1, 0.5), DomainError);
  EXPECT_THROW(roc_line_from_cost_point(1.0, 0.1, 0.5), DomainError);
  EXPECT_THROW(cost_line_from_roc_point(0.2, 0.8, 1.0), DomainError);
}

TEST(Duality, RoundTrip) {
  std::mt19937_64 rng(239);
  for (int k = 0; k < 200; ++k) {
    const double pi = fixtures::uniform(rng, 0.05, 0.95);
    const double fp = fixtures::uniform(rng, 0.0, 1.0), tp = fixtures::uniform(rng, 0.0, 1.0);
    const CostLine line = cost_line_from_roc_point(fp, tp, pi);
    const double c1 = fixtures::uniform(rng, 0.05, 0.45), c2 = fixtures::uniform(rng, 0.55, 0.95);
    const RocLine l1 = roc_line_from_cost_point(c1, line(c1), pi);
    const RocLine l2 = roc_line_from_cost_point(c2, line(c2), pi);
    // the dual line of each point on the cost line passes through the point
    EXPECT_NEAR(l1.slope * fp + l1.intercept, tp, 1e-12);
    const RocVertex back = intersect(l1, l2);
    EXPECT_NEAR(back.fp, fp, 1e-12);
    EXPECT_NEAR(back.tp, tp, 1e-12);
  }
}
