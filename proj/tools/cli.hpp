#ifndef BEXP_TOOLS_CLI_HPP_
#define BEXP_TOOLS_CLI_HPP_

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bexp/bexp.hpp"
#include "io.hpp"

namespace bexp::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kDiverged = 3 };

struct Route {
  std::string subcommand;
  std::vector<std::string> operations;
};

// Library operations reached by each subcommand.
inline const std::vector<Route>& routing_table() {
  static const std::vector<Route> table{
      {"divergence",
       {"f_divergence_direct", "divergence_via_weight", "variational", "variational_f_divergence",
        "generalized_I_fg", "inf_convolve", "perspective_eval", "builtin"}},
      {"translate",
       {"gamma_from_f", "f_from_gamma", "w_from_gamma", "gamma_from_w", "csiszar_dual",
        "is_symmetric_weight", "lf_conjugate_eval"}},
      {"bound",
       {"surrogate_bound", "pinsker_general", "kl_pinsker_explicit", "fedotov_reference",
        "classic_comparators", "pinsker_special"}},
      {"curve",
       {"risk_curve", "roc_curve", "auc", "minLL_from_beta", "beta_from_minLL",
        "explicit_conversions", "roc_risk_duality", "neyman_pearson_beta", "likelihood_ratio"}},
      {"loss",
       {"cost_loss", "partial_loss", "conditional_risk", "bayes_risk", "regret",
        "composite_loss", "canonical_link", "bregman_dual_check", "weight_from_bayes_risk",
        "builtin_loss"}},
      {"info",
       {"statistical_information", "bregman_information", "f_from_loss", "loss_from_f",
        "bayes_risk_01", "statistical_information_01", "generalized_variational",
        "linear_loss_risk", "restricted_01_risk", "aco_hull_invariance", "classification_rates",
        "jensen_gap"}},
      {"mmd", {"mmd_biased", "KernelSample"}},
      {"table", {"builtin", "gamma_from_f"}},
  };
  return table;
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace details {

inline nlohmann::json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

struct Emit {
  std::ostream& out;
  bool json = false;

  // Prints a scalar result; +inf signals a diverged computation.
  int scalar(double value, const std::string& method, nlohmann::json witness = nullptr) const {
    if (json) {
      nlohmann::json doc{{"value", json_number(value)}, {"witness", witness}, {"method", method}};
      out << doc.dump() << "\n";
    } else {
      out << format_number(value) << "\n";
    }
    return std::isinf(value) && value > 0 ? kDiverged : kOk;
  }
};

inline std::map<std::string, double> divergence_params(const std::optional<double>& eps) {
  std::map<std::string, double> params;
  if (eps) params["eps"] = *eps;
  return params;
}

inline ProperLoss resolve_loss(const std::string& name) {
  if (name.rfind("weight-file:", 0) == 0) {
    return ProperLoss::from_weight(name, io::load_weight(name.substr(12)));
  }
  return builtin_loss(name);
}

inline std::vector<PinskerConstraint::Point> parse_constraints(const std::string& text) {
  std::vector<PinskerConstraint::Point> pts;
  for (const std::string& item : io::details::split(text, ',')) {
    const auto parts = io::details::split(item, ':');
    double a = 0.0, b = 0.0;
    if (parts.size() != 2 || !io::details::parse_number(parts[0], a) ||
        !io::details::parse_number(parts[1], b)) {
      throw ArgumentError("malformed constraint '" + item + "', expected pi:psi");
    }
    pts.push_back({a, b});
  }
  return pts;
}

inline void write_atoms(std::ostream& out, const WeightFunction& w) {
  out << "atoms\nlocation,mass\n";
  for (const Atom& a : w.atoms()) {
    out << format_number(a.location) << "," << format_number(a.mass) << "\n";
  }
}

inline std::vector<double> open_grid(int n) {
  if (n < 1) throw ArgumentError("grid size must be positive");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = (k + 1.0) / (n + 1.0);
  return g;
}

inline void write_curve(std::ostream& out, const CurvePoints& c) {
  out << "# kind=" << to_string(c.kind);
  for (const auto& [k, v] : c.metadata) out << " " << k << "=" << v;
  out << "\nx,y\n";
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    out << format_number(c.x[i]) << "," << format_number(c.y[i]) << "\n";
  }
}

}  // namespace details

/*
 * Parses and executes one command line. Results go to `out`, diagnostics to
 * `err`. Returns the process exit code.
 */
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Calculus of binary experiments"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "JSON output {value, witness, method}");

  std::function<int()> action;

  // divergence
  std::string exp_path, f_name, g_name, method = "direct";
  std::optional<double> eps;
  auto* div = app.add_subcommand("divergence", "f-divergence of an experiment");
  div->add_option("--experiment", exp_path, "experiment file")->required();
  div->add_option("--f", f_name, "builtin divergence")->required();
  div->add_option("--g", g_name, "second generator for --method fg");
  div->add_option("--eps", eps, "kl_eps parameter");
  div->add_option("--method", method, "direct|weight|variational|fg")
      ->check(CLI::IsMember({"direct", "weight", "variational", "fg"}));
  div->callback([&] {
    action = [&]() -> int {
      details::Emit emit{out, json};
      const BinaryExperiment exp = io::load_experiment(exp_path);
      const DivergenceSpec spec = builtin(f_name, details::divergence_params(eps));
      if (method == "weight" || (method == "direct" && !spec.f)) {
        return emit.scalar(divergence_via_weight(exp, spec.gamma), "divergence_via_weight");
      }
      if (!spec.f) throw ArgumentError("'" + f_name + "' has no closed-form generator");
      if (method == "direct") return emit.scalar(f_divergence_direct(exp, *spec.f), "f_divergence_direct");
      if (method == "variational") {
        return emit.scalar(variational_f_divergence(exp, *spec.f) - (*spec.f)(1.0),
                           "variational_f_divergence");
      }
      if (g_name.empty()) throw ArgumentError("--method fg needs --g");
      const DivergenceSpec g = builtin(g_name, details::divergence_params(eps));
      if (!g.f) throw ArgumentError("'" + g_name + "' has no closed-form generator");
      const double at_one = inf_convolve(*spec.f, *g.f, 1.0);
      return emit.scalar(generalized_I_fg(exp, *spec.f, *g.f) - at_one, "generalized_I_fg");
    };
  });

  // translate
  std::string from, to, t_div, t_loss;
  double t_pi = 0.5;
  int grid = 9;
  bool dual = false;
  auto* tr = app.add_subcommand("translate", "convert between f, gamma and w");
  tr->add_option("--from", from)->required()->check(CLI::IsMember({"f", "gamma", "w"}));
  tr->add_option("--to", to)->required()->check(CLI::IsMember({"f", "gamma", "w"}));
  tr->add_option("--div", t_div, "builtin divergence (for --from f|gamma)");
  tr->add_option("--loss", t_loss, "loss name (for --from w)");
  tr->add_option("--eps", eps, "kl_eps parameter");
  tr->add_option("--pi", t_pi, "prior for w");
  tr->add_option("--grid", grid, "number of grid points");
  tr->add_flag("--dual", dual, "use the Csiszar dual of the generator");
  tr->callback([&] {
    action = [&]() -> int {
      WeightFunction gamma;
      if (from == "w") {
        if (t_loss.empty()) throw ArgumentError("--from w needs --loss");
        gamma = gamma_from_w(details::resolve_loss(t_loss).weight(), t_pi);
      } else {
        if (t_div.empty()) throw ArgumentError("--from " + from + " needs --div");
        const DivergenceSpec spec = builtin(t_div, details::divergence_params(eps));
        if (from == "f" && !spec.f) throw ArgumentError("'" + t_div + "' has no closed-form generator");
        gamma = from == "f" ? gamma_from_f(dual ? csiszar_dual(*spec.f) : *spec.f) : spec.gamma;
      }
      const auto g = details::open_grid(grid);
      out << "# from=" << from << " to=" << to << " pi=" << format_number(t_pi)
          << " symmetric=" << (is_symmetric_weight(gamma) ? "yes" : "no") << "\n";
      if (to == "f") {
        const ConvexFunction f = f_from_gamma(gamma);
        out << "t,f,conjugate_at_slope\n";
        for (double x : g) {
          const double t = x / (1.0 - x);
          out << format_number(t) << "," << format_number(f(t)) << ","
              << format_number(lf_conjugate_eval(f, f.deriv1 ? f.deriv1(t) : 0.0)) << "\n";
        }
        out << "kinks\nlocation,jump\n";
        for (const Kink& k : f.kinks) {
          out << format_number(k.location) << "," << format_number(k.slope_jump) << "\n";
        }
        return kOk;
      }
      const WeightFunction target = to == "w" ? w_from_gamma(gamma, t_pi) : gamma;
      out << (to == "w" ? "c,w\n" : "pi,gamma\n");
      for (double x : g) out << format_number(x) << "," << format_number(target(x)) << "\n";
      details::write_atoms(out, target);
      return kOk;
    };
  });

  // bound
  std::string b_kind, b_loss, b_div, b_cons;
  double c0 = 0.5, alpha = 0.1;
  std::optional<double> v;
  bool closed = false;
  auto* bd = app.add_subcommand("bound", "surrogate and Pinsker-type bounds");
  bd->add_option("kind", b_kind)->required()->check(
      CLI::IsMember({"surrogate", "pinsker", "kl", "fedotov", "classic"}));
  bd->add_option("--loss", b_loss);
  bd->add_option("--c0", c0);
  bd->add_option("--alpha", alpha);
  bd->add_option("--div", b_div);
  bd->add_option("--eps", eps);
  auto* v_opt = bd->add_option("--v", v, "variational distance");
  bd->add_option("--constraints", b_cons, "pi1:psi1,pi2:psi2,...")->excludes(v_opt);
  bd->add_flag("--closed-form", closed, "use the closed form instead of the minimization");
  bd->callback([&] {
    action = [&]() -> int {
      details::Emit emit{out, json};
      if (b_kind == "surrogate") {
        if (b_loss.empty()) throw ArgumentError("bound surrogate needs --loss");
        return emit.scalar(surrogate_bound(details::resolve_loss(b_loss), c0, alpha), "surrogate_bound");
      }
      if (b_kind == "classic") {
        if (!v) throw ArgumentError("bound classic needs --v");
        nlohmann::json w;
        for (const auto& [k, val] : classic_comparators(*v)) w[k] = details::json_number(val);
        const BoundResult kl = kl_pinsker_explicit(*v);
        return emit.scalar(kl.value, "classic_comparators", w);
      }
      if (b_kind == "kl" || b_kind == "fedotov") {
        if (!v) throw ArgumentError("bound " + b_kind + " needs --v");
        if (b_kind == "fedotov") return emit.scalar(fedotov_reference(*v), "fedotov_reference");
        const BoundResult r = kl_pinsker_explicit(*v);
        return emit.scalar(r.value, r.method, r.witness);
      }
      if (b_div.empty()) throw ArgumentError("bound pinsker needs --div");
      if (!v && b_cons.empty()) throw ArgumentError("bound pinsker needs --v or --constraints");
      if (closed) {
        if (!v) throw ArgumentError("--closed-form needs --v");
        return emit.scalar(pinsker_special(b_div, *v), "pinsker_special");
      }
      const DivergenceSpec spec = builtin(b_div, details::divergence_params(eps));
      const PinskerConstraint cons = v ? PinskerConstraint::from_variational(*v)
                                       : PinskerConstraint(details::parse_constraints(b_cons));
      const BoundResult r = pinsker_general(spec, cons);
      return emit.scalar(r.value, r.method, r.witness);
    };
  });

  // curve
  std::string c_kind, c_exp;
  double c_pi = 0.5, c_gamma = 0.5;
  int points = 11;
  auto* cv = app.add_subcommand("curve", "risk, ROC and Neyman-Pearson curves");
  cv->add_option("kind", c_kind)->required()->check(
      CLI::IsMember({"risk", "roc", "beta", "minll", "beta-gamma", "cost-lines"}));
  cv->add_option("--experiment", c_exp);
  cv->add_option("--pi", c_pi);
  cv->add_option("--gamma", c_gamma, "parameter of the beta-gamma family");
  cv->add_option("--points", points);
  cv->callback([&] {
    action = [&]() -> int {
      if (points < 2) throw ArgumentError("--points must be at least 2");
      std::vector<double> grid(static_cast<std::size_t>(points));
      for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = k / (points - 1.0);
      if (c_kind == "beta-gamma") {
        if (!(c_gamma > 0.0 && c_gamma <= 1.0)) throw DomainError("--gamma must lie in (0,1]");
        const SmoothCurve bayes{[g = c_gamma](double p) { return g * p * (1.0 - p); },
                                [g = c_gamma](double p) { return g * (1.0 - 2.0 * p); }};
        CurvePoints c{CurveKind::beta, grid, {}, {{"gamma", format_number(c_gamma)}}};
        for (double a : grid) c.y.push_back(beta_explicit(bayes, a).value);
        details::write_curve(out, c);
        return kOk;
      }
      if (c_exp.empty()) throw ArgumentError("curve " + c_kind + " needs --experiment");
      const BinaryExperiment exp = io::load_experiment(c_exp);
      if (c_kind == "risk") {
        const Task task(c_pi, exp);
        details::write_curve(out, risk_curve(task, posterior_estimate(task), grid));
      } else if (c_kind == "roc") {
        CurvePoints c = roc_curve(exp, likelihood_ratio_score(exp));
        c.metadata["auc"] = format_number(auc(c));
        details::write_curve(out, c);
      } else if (c_kind == "beta") {
        CurvePoints c{CurveKind::beta, grid, {}, {{"source", "bayes_risk_01"}}};
        auto bayes = [&](double p) { return p >= 1.0 ? 0.0 : bayes_risk_01(p, exp); };
        for (double a : grid) c.y.push_back(beta_from_minLL(bayes, a));
        details::write_curve(out, c);
      } else if (c_kind == "minll") {
        CurvePoints c{CurveKind::risk_vs_prior, {}, {}, {{"source", "neyman_pearson_beta"}}};
        auto beta = [&](double a) { return neyman_pearson_beta(exp, a); };
        for (double p : grid) {
          if (p <= 0.0 || p >= 1.0) continue;
          c.x.push_back(p);
          c.y.push_back(minLL_from_beta(beta, p));
        }
        details::write_curve(out, c);
      } else {
        out << "# cost lines of the likelihood-ratio ROC vertices, pi=" << format_number(c_pi)
            << "\nfp,tp,at_c0,at_c1\n";
        for (const RocVertex& r : likelihood_ratio_vertices(exp)) {
          const CostLine l = cost_line_from_roc_point(r.fp, r.tp, c_pi);
          out << format_number(r.fp) << "," << format_number(r.tp) << "," << format_number(l.at0)
              << "," << format_number(l.at1) << "\n";
        }
      }
      return kOk;
    };
  });

  // loss
  std::string l_name;
  double l_eta = 0.5, l_est = 0.5;
  std::optional<double> l_h;
  auto* ls = app.add_subcommand("loss", "evaluate a proper loss");
  ls->add_option("--loss", l_name)->required();
  ls->add_option("--eta", l_eta, "true class probability");
  ls->add_option("--estimate", l_est, "estimated class probability");
  ls->add_option("--link-value", l_h, "prediction on the canonical link scale");
  ls->callback([&] {
    action = [&]() -> int {
      const ProperLoss loss = details::resolve_loss(l_name);
      out << "quantity,value\n";
      out << "partial_loss_pos," << format_number(partial_loss(loss, 1, l_est)) << "\n";
      out << "partial_loss_neg," << format_number(partial_loss(loss, -1, l_est)) << "\n";
      out << "conditional_risk," << format_number(conditional_risk(loss, l_eta, l_est)) << "\n";
      out << "bayes_risk," << format_number(bayes_risk(loss, l_eta)) << "\n";
      out << "regret," << format_number(regret(loss, l_eta, l_est)) << "\n";
      if (l_h) {
        out << "composite_loss_canonical,"
            << format_number(composite_loss_canonical(loss, l_eta, *l_h)) << "\n";
      }
      return kOk;
    };
  });

  // info
  std::string i_exp, i_loss;
  double i_pi = 0.5;
  bool sign_class = false;
  auto* inf = app.add_subcommand("info", "statistical and Bregman information of a task");
  inf->add_option("--experiment", i_exp)->required();
  inf->add_option("--pi", i_pi);
  inf->add_option("--loss", i_loss)->required();
  inf->add_flag("--sign-class", sign_class, "also report the complete sign class quantities");
  inf->callback([&] {
    action = [&]() -> int {
      const BinaryExperiment exp = io::load_experiment(i_exp);
      const Task task(i_pi, exp);
      const ProperLoss loss = details::resolve_loss(i_loss);
      const BayesRisk bayes = bayes_risk_of(loss);
      const double si = statistical_information(task, loss);
      out << "quantity,value\n";
      out << "statistical_information," << format_number(si) << "\n";
      const BregmanInformation bi = bregman_information(task, loss);
      out << "bregman_information," << format_number(bi.value) << "\n";
      out << "f_divergence," << format_number(f_divergence_direct(exp, f_from_loss(bayes, i_pi)))
          << "\n";
      out << "bayes_risk_01," << format_number(bayes_risk_01(i_pi, exp)) << "\n";
      out << "statistical_information_01," << format_number(statistical_information_01(i_pi, exp))
          << "\n";
      if (sign_class) {
        const FunctionClass cls = FunctionClass::complete_sign_class(exp.size());
        out << "generalized_variational," << format_number(generalized_variational(exp, i_pi, cls).value)
            << "\n";
        out << "linear_loss_risk," << format_number(linear_loss_risk(exp, i_pi, cls).value) << "\n";
        out << "restricted_01_risk," << format_number(restricted_01_risk(exp, i_pi, cls)) << "\n";
      }
      return std::isinf(si) ? kDiverged : kOk;
    };
  });

  // mmd
  std::string m_sample, m_kernel = "linear";
  auto* mm = app.add_subcommand("mmd", "biased maximum mean discrepancy of a labelled sample");
  mm->add_option("--sample", m_sample)->required();
  mm->add_option("--kernel", m_kernel, "linear or rbf:<sigma>");
  mm->callback([&] {
    action = [&]() -> int {
      const io::LabelledFeatures data = io::load_sample(m_sample);
      std::optional<KernelSample> sample;
      if (m_kernel == "linear") {
        sample = KernelSample::linear(data.labels, data.features);
      } else if (m_kernel.rfind("rbf:", 0) == 0) {
        double sigma = 0.0;
        if (!io::details::parse_number(m_kernel.substr(4), sigma)) {
          throw ArgumentError("malformed kernel '" + m_kernel + "'");
        }
        sample = KernelSample::rbf(data.labels, data.features, sigma);
      } else {
        throw ArgumentError("unknown kernel '" + m_kernel + "'");
      }
      const double j = mmd_biased(*sample);
      out << "quantity,value\nmmd_b2," << format_number(j) << "\nmmd_b,"
          << format_number(std::sqrt(j)) << "\n";
      return kOk;
    };
  });

  // table
  int t_grid = 9;
  auto* tb = app.add_subcommand("table", "weights of the builtin divergences on a prior grid");
  tb->add_option("--grid", t_grid, "number of interior grid points");
  tb->callback([&] {
    action = [&]() -> int {
      const auto& names = builtin_divergence_names();
      std::vector<DivergenceSpec> specs;
      out << "pi";
      for (const auto& n : names) {
        specs.push_back(builtin(n));
        out << "," << n;
      }
      out << "\n";
      for (double p : details::open_grid(t_grid)) {
        out << format_number(p);
        for (const auto& s : specs) out << "," << format_number(s.gamma(p));
        out << "\n";
      }
      out << "atoms\nname,location,mass\n";
      for (const auto& s : specs) {
        for (const Atom& a : s.gamma.atoms()) {
          out << s.name << "," << format_number(a.location) << "," << format_number(a.mass) << "\n";
        }
      }
      return kOk;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  try {
    return action();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const DivergenceError& e) {
    out << "inf\n";
    err << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace bexp::cli

#endif  // BEXP_TOOLS_CLI_HPP_
