#include "gpcsg/studies.hpp"

#include "gpcsg/analysis.hpp"
#include "gpcsg/basis.hpp"
#include "gpcsg/galerkin.hpp"
#include "gpcsg/integrate.hpp"
#include "gpcsg/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace gpcsg {

namespace {

constexpr double kBoundSlack = 1.05;
constexpr double kCvTolerance = 1e-12;

std::function<double(double)> polynomial(std::vector<double> coeffs) {
  return [coeffs = std::move(coeffs)](double z) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * z + *it;
    return v;
  };
}

std::vector<double> scaled(std::vector<double> coeffs, double factor) {
  for (double& c : coeffs) c *= factor;
  return coeffs;
}

double nodal_norm_sq(const QuadratureRule& quad, const Eigen::VectorXd& nodal) {
  double sum = 0.0;
  for (int q = 0; q < quad.order(); ++q) sum += quad.weights[q] * nodal[q] * nodal[q];
  return sum;
}

double weighted_norm_sq(const Eigen::VectorXd& coeffs, const std::vector<double>& weights) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double v = weights[i] * coeffs[i];
    sum += v * v;
  }
  return sum;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::string fmt(double v) { return format_double(v); }

std::string pass_text(bool pass) { return pass ? "true" : "false"; }

// Shared problem setup for the Galerkin-based studies.
struct Problem {
  Measure measure;
  SourceTerm source;
  ModelParams params;
};

Problem make_problem(const RunConfig& cfg) {
  return {cfg.build_measure(), cfg.build_source(), cfg.model};
}

struct InitialData {
  std::vector<double> rho0;
  std::vector<double> m0;
  double rho_factor = 1.0;
  double m_factor = 1.0;
};

double factor_for(double current, double target) {
  return current > 0.0 ? std::sqrt(target / current) : 1.0;
}

// Rescales the configured initial polynomials according to initial.scale.
InitialData scale_initial(const RunConfig& cfg, const Problem& prob, const BasisFamily& basis,
                          const QuadratureRule& galerkin_quad, const QuadratureRule& oracle_quad,
                          const TheoremConstants& tc) {
  InitialData data{cfg.initial.rho0, cfg.initial.m0};
  const auto& p = prob.params;
  const double f = cfg.initial.fraction;
  const double c2 = p.c * p.c;

  double rho_now = 0.0, m_now = 0.0, rho_target = 0.0, m_target = 0.0;
  switch (cfg.initial.scale) {
    case InitialScaling::None:
      return data;
    case InitialScaling::L2Decay:
      rho_now = oracle_quad.integrate([&](double z) { return std::pow(polynomial(data.rho0)(z), 2); });
      m_now = oracle_quad.integrate([&](double z) { return std::pow(polynomial(data.m0)(z), 2); });
      rho_target = f * p.b * p.b / (4.0 * c2);
      m_target = f * p.a * p.a / (4.0 * c2);
      break;
    case InitialScaling::Sensitivity: {
      const int n = cfg.decay.norm_order;
      rho_now = hn_pi_norm_sq(polynomial_function(data.rho0), n, oracle_quad);
      m_now = hn_pi_norm_sq(polynomial_function(data.m0), n, oracle_quad);
      rho_target = f * p.b * p.b * tc.C0_sens;
      m_target = f * p.a * p.a * tc.C0_sens;
      break;
    }
    case InitialScaling::Stability: {
      const auto mu = mu_weights(basis.max_degree(), tc.q);
      rho_now = weighted_norm_sq(project(polynomial(data.rho0), basis, galerkin_quad), mu);
      m_now = weighted_norm_sq(project(polynomial(data.m0), basis, galerkin_quad), mu);
      rho_target = f * p.b * p.b * tc.C0_hat;
      m_target = f * p.a * p.a * tc.C0_hat;
      break;
    }
  }
  data.rho_factor = factor_for(rho_now, rho_target);
  data.m_factor = factor_for(m_now, m_target);
  data.rho0 = scaled(data.rho0, data.rho_factor);
  data.m0 = scaled(data.m0, data.m_factor);
  return data;
}

// H^n_pi norm of a function known at the nodes of a Gaussian rule, through
// its interpolant of degree Q-1.
double nodal_hn_norm_sq(const Eigen::VectorXd& nodal, const BasisFamily& interp_basis,
                        const QuadratureRule& quad, int n) {
  if (n == 0) return nodal_norm_sq(quad, nodal);
  return hn_pi_norm_sq(expansion_function(interp_basis, project_nodal(nodal, interp_basis, quad)),
                       n, quad);
}

}  // namespace

const Table& StudyResult::table(const std::string& name) const {
  for (const auto& [file, t] : tables) {
    if (file == name) return t;
  }
  throw std::out_of_range("study: no table '" + name + "'");
}

// ---------------------------------------------------------------------------

StudyResult run_decay(const RunConfig& cfg) {
  cfg.validate();
  const Problem prob = make_problem(cfg);
  const auto& p = prob.params;
  const int K = cfg.galerkin.K;
  const int n = cfg.decay.norm_order;

  const QuadratureRule gquad = build_quadrature(prob.measure, cfg.galerkin_quad_nodes());
  const BasisFamily basis = build_basis(prob.measure, gquad, K);
  const GalerkinTensors tensors = assemble_tensors(basis, gquad, p, prob.source);
  const QuadratureRule oquad = build_quadrature(prob.measure, cfg.decay.oracle_nodes);
  const BasisFamily interp = build_basis(prob.measure, oquad, oquad.order() - 1);

  const KappaReport kappa =
      estimate_kappa(prob.source, p, prob.measure, std::max(cfg.check.max_order, n),
                     cfg.check.grid_size);
  const TheoremConstants tc = theorem_constants(kappa, basis.growth_exponent(), p,
                                                prob.measure.support());
  const InitialData init = scale_initial(cfg, prob, basis, gquad, oquad, tc);
  const auto rho0 = polynomial(init.rho0);
  const auto m0 = polynomial(init.m0);

  StudyResult result;

  // thresholds on the (scaled) initial data
  const double c2 = p.c * p.c;
  const double l2_rho0 = oquad.integrate([&](double z) { return rho0(z) * rho0(z); });
  const double l2_m0 = oquad.integrate([&](double z) { return m0(z) * m0(z); });
  const double hn_rho0 = hn_pi_norm_sq(polynomial_function(init.rho0), n, oquad);
  const double hn_m0 = hn_pi_norm_sq(polynomial_function(init.m0), n, oquad);
  GalerkinState g0{project(rho0, basis, gquad), project(m0, basis, gquad), 0.0};
  const auto mu = mu_weights(K, tc.q);
  const double mu_rho0 = weighted_norm_sq(g0.rho_hat, mu);
  const double mu_m0 = weighted_norm_sq(g0.m_hat, mu);

  const bool l2_ok = l2_rho0 <= p.b * p.b / (4 * c2) && l2_m0 <= p.a * p.a / (4 * c2);
  const bool sens_ok = hn_rho0 <= p.b * p.b * tc.C0_sens && hn_m0 <= p.a * p.a * tc.C0_sens;
  const bool stab_ok = mu_rho0 <= p.b * p.b * tc.C0_hat && mu_m0 <= p.a * p.a * tc.C0_hat;

  result.report.push_back("initial scaling: " + std::string(to_string(cfg.initial.scale)) +
                          " (rho factor " + fmt(init.rho_factor) + ", m factor " +
                          fmt(init.m_factor) + ")");
  auto threshold_line = [&](const char* name, bool ok) {
    result.report.push_back(std::string(name) + " smallness threshold: " +
                            (ok ? "satisfied" : "VIOLATED (warning)"));
  };
  threshold_line("L2 decay", l2_ok);
  threshold_line("H^n sensitivity", sens_ok);
  threshold_line("Galerkin stability", stab_ok);

  const double dt_limit = explicit_dt_limit(p, kappa.R, std::sqrt(l2_rho0), std::sqrt(l2_m0));
  if (cfg.time.dt > dt_limit) {
    result.report.push_back("warning: dt = " + fmt(cfg.time.dt) +
                            " exceeds the explicit stability heuristic " + fmt(dt_limit));
  }

  const Trajectory gal = solve_galerkin(tensors, p, g0, cfg.time);
  const Trajectory col = solve_collocation(p, prob.source, oquad, rho0, m0, cfg.time, cfg.threads);

  const double E0 = p.a * l2_rho0 + p.b * l2_m0;
  const double EH0 = p.a * hn_rho0 + p.b * hn_m0;
  const double sens_factor = std::pow(5.0 * std::pow(tc.nu, n) * factorial(n), 2);
  const double Ehat0 = p.a * mu_rho0 + p.b * mu_m0;

  Table decay({"t", "E_pi", "norm_rho_sq", "norm_m_sq", "bound_rho", "bound_m", "hn_rho_sq",
               "hn_m_sq", "sens_bound_rho", "sens_bound_m", "galerkin_rho_sq", "galerkin_m_sq",
               "galerkin_rho_mu_sq", "galerkin_m_mu_sq", "stab_bound_rho", "stab_bound_m"});
  int l2_violations = 0, sens_violations = 0, stab_violations = 0;
  std::vector<double> e_pi, gal_rho, gal_m, gal_hat;
  for (std::size_t s = 0; s < col.samples(); ++s) {
    const double t = col.times[s];
    const Eigen::VectorXd cr = col.rho(s), cm = col.m(s);
    const double nr = nodal_norm_sq(oquad, cr);
    const double nm = nodal_norm_sq(oquad, cm);
    const double hr = nodal_hn_norm_sq(cr, interp, oquad, n);
    const double hm = nodal_hn_norm_sq(cm, interp, oquad, n);
    const double bound_rho = E0 * std::exp(-p.a * t) / p.a;
    const double bound_m = E0 * std::exp(-p.b * t) / p.b;
    const double sens_rho = sens_factor * EH0 * std::exp(-p.a * t) / p.a;
    const double sens_m = sens_factor * EH0 * std::exp(-p.b * t) / p.b;

    const Eigen::VectorXd gr = gal.rho(s), gm = gal.m(s);
    const double gmr = weighted_norm_sq(gr, mu);
    const double gmm = weighted_norm_sq(gm, mu);
    const double stab_rho = Ehat0 * std::exp(-p.a * t) / p.a;
    const double stab_m = Ehat0 * std::exp(-p.b * t) / p.b;

    if (nr > kBoundSlack * bound_rho || nm > kBoundSlack * bound_m) ++l2_violations;
    if (hr > kBoundSlack * sens_rho || hm > kBoundSlack * sens_m) ++sens_violations;
    if (gmr > kBoundSlack * stab_rho || gmm > kBoundSlack * stab_m) ++stab_violations;

    decay.add_row({t, p.a * nr + p.b * nm, nr, nm, bound_rho, bound_m, hr, hm, sens_rho, sens_m,
                   gr.squaredNorm(), gm.squaredNorm(), gmr, gmm, stab_rho, stab_m});
    e_pi.push_back(p.a * nr + p.b * nm);
    gal_rho.push_back(p.a * gr.squaredNorm());
    gal_m.push_back(p.b * gm.squaredNorm());
    gal_hat.push_back(p.a * gmr + p.b * gmm);
  }

  const double t1 = cfg.decay.fit_t1 >= 0.0 ? cfg.decay.fit_t1 : 0.2 * cfg.time.t_end;
  const double t2 = cfg.decay.fit_t2 >= 0.0 ? cfg.decay.fit_t2 : 0.8 * cfg.time.t_end;
  Table rates({"quantity", "rate", "r_squared", "reference_rate", "note"});
  auto add_rate = [&](const std::string& name, const std::vector<double>& energy, double ref) {
    if (std::all_of(energy.begin(), energy.end(), [](double e) { return e == 0.0; })) {
      rates.add_row({name, "nan", "nan", fmt(ref), "zero initial perturbation, nothing to fit"});
      return;
    }
    try {
      const DecayFit fit = fit_decay_rate(col.times, energy, t1, t2);
      rates.add_row({name, fmt(fit.rate), fmt(fit.r_squared), fmt(ref), ""});
    } catch (const std::exception& e) {
      rates.add_row({name, "nan", "nan", fmt(ref), e.what()});
    }
  };
  add_rate("galerkin_a_rho_sq", gal_rho, p.a);
  add_rate("galerkin_b_m_sq", gal_m, p.b);
  add_rate("galerkin_E_mu", gal_hat, std::min(p.a, p.b));
  add_rate("collocation_E_pi", e_pi, std::min(p.a, p.b));

  auto bound_line = [&](const std::string& name, int violations) {
    result.report.push_back(name + " bound: " +
                            (violations == 0 ? "holds at every sample"
                                             : "violated at " + std::to_string(violations) +
                                                   " samples"));
  };
  bound_line("L2 decay (n = 0)", l2_violations);
  bound_line("H^n sensitivity (n = " + std::to_string(n) + ")", sens_violations);
  bound_line("Galerkin stability", stab_violations);
  for (std::size_t r = 0; r < rates.row_count(); ++r) {
    result.report.push_back("fitted rate " + rates.rows()[r][0] + " = " + rates.rows()[r][1] +
                            (rates.rows()[r][4].empty() ? "" : " (" + rates.rows()[r][4] + ")"));
  }

  const bool hard = (l2_violations > 0 && l2_ok) || (sens_violations > 0 && sens_ok) ||
                    (stab_violations > 0 && stab_ok);
  const bool soft = l2_violations + sens_violations + stab_violations > 0;
  result.exit_code = hard ? kExitFailure : soft ? kExitWarning : kExitOk;

  result.tables.emplace_back("decay.csv", std::move(decay));
  result.tables.emplace_back("decay_rates.csv", std::move(rates));
  result.charts.push_back({"decay.svg", "decay.csv", "Perturbation decay against the bounds", "t",
                           {"norm_rho_sq", "bound_rho", "galerkin_rho_mu_sq", "stab_bound_rho"},
                           true, "", "", ""});
  return result;
}

// ---------------------------------------------------------------------------

StudyResult run_converge(const RunConfig& cfg) {
  cfg.validate();
  const Problem prob = make_problem(cfg);
  const auto& p = prob.params;
  const auto& Ks = cfg.converge.K_list;
  const int K_max = Ks.back();
  const int oracle_nodes = std::max(cfg.converge.oracle_nodes, (3 * K_max + 1) / 2);
  const QuadratureRule oquad = build_quadrature(prob.measure, oracle_nodes);
  const auto rho0 = polynomial(cfg.initial.rho0);
  const auto m0 = polynomial(cfg.initial.m0);

  const Trajectory col = solve_collocation(p, prob.source, oquad, rho0, m0, cfg.time, cfg.threads);
  const Eigen::VectorXd col_rho = col.rho(col.samples() - 1);
  const Eigen::VectorXd col_m = col.m(col.samples() - 1);

  struct Row {
    double err_rho = 0, err_m = 0, proj_rho = 0, proj_m = 0;
  };
  std::vector<Row> rows(Ks.size());
  parallel_for(Ks.size(), cfg.threads, [&](std::size_t idx) {
    const int K = Ks[idx];
    const QuadratureRule gquad = build_quadrature(prob.measure, default_quadrature_order(K));
    const BasisFamily basis = build_basis(prob.measure, gquad, K);
    const GalerkinTensors tensors = assemble_tensors(basis, gquad, p, prob.source);
    const GalerkinState g0{project(rho0, basis, gquad), project(m0, basis, gquad), 0.0};
    const Trajectory gal = solve_galerkin(tensors, p, g0, cfg.time);
    const Eigen::VectorXd gr = gal.rho(gal.samples() - 1), gm = gal.m(gal.samples() - 1);

    const Eigen::VectorXd bar_rho = project_nodal(col_rho, basis, oquad);
    const Eigen::VectorXd bar_m = project_nodal(col_m, basis, oquad);
    Eigen::VectorXd d_rho(oquad.order()), d_m(oquad.order()), e_rho(oquad.order()),
        e_m(oquad.order());
    for (int q = 0; q < oquad.order(); ++q) {
      const Eigen::VectorXd phi = basis.eval_all(oquad.nodes[q]);
      d_rho[q] = col_rho[q] - phi.dot(gr);
      d_m[q] = col_m[q] - phi.dot(gm);
      e_rho[q] = col_rho[q] - phi.dot(bar_rho);
      e_m[q] = col_m[q] - phi.dot(bar_m);
    }
    rows[idx] = {std::sqrt(nodal_norm_sq(oquad, d_rho)), std::sqrt(nodal_norm_sq(oquad, d_m)),
                 std::sqrt(nodal_norm_sq(oquad, e_rho)), std::sqrt(nodal_norm_sq(oquad, e_m))};
  });

  StudyResult result;
  Table table({"K", "err_rho_L2pi", "err_m_L2pi", "ratio", "proj_err_rho", "proj_err_m"});
  bool spectral = true;
  for (std::size_t i = 0; i < Ks.size(); ++i) {
    const double ratio = i == 0 ? NAN : rows[i].err_rho / rows[i - 1].err_rho;
    table.add_row({std::to_string(Ks[i]), fmt(rows[i].err_rho), fmt(rows[i].err_m), fmt(ratio),
                   fmt(rows[i].proj_rho), fmt(rows[i].proj_m)});
    if (i > 0 && rows[i - 1].err_rho > cfg.converge.floor &&
        !(rows[i].err_rho <= cfg.converge.max_ratio * rows[i - 1].err_rho)) {
      spectral = false;
    }
  }
  result.report.push_back("oracle: " + std::to_string(oracle_nodes) +
                          "-node collocation at t = " + fmt(cfg.time.t_end));
  result.report.push_back(std::string("error reduction per K step <= ") +
                          fmt(cfg.converge.max_ratio) + " until the floor " +
                          fmt(cfg.converge.floor) + ": " + (spectral ? "yes" : "NO"));
  result.exit_code = spectral ? kExitOk : kExitWarning;
  result.tables.emplace_back("converge.csv", std::move(table));
  result.charts.push_back({"converge.svg", "converge.csv", "Galerkin error against collocation",
                           "K", {"err_rho_L2pi", "err_m_L2pi", "proj_err_rho"}, true, "", "", ""});
  return result;
}

// ---------------------------------------------------------------------------

StudyResult run_cv_sweep(const RunConfig& cfg) {
  cfg.validate();
  const Measure measure = cfg.build_measure();
  const Interval support = measure.support();
  const QuadratureRule quad = build_quadrature(measure, cfg.cv_sweep.quad_nodes);
  const double mean_z = quad.integrate([](double z) { return z; });
  const double var_z = quad.integrate([&](double z) { return (z - mean_z) * (z - mean_z); });

  struct Row {
    std::string grid, sweep;
    double sweep_value, k, d;
    ModelParams params;
    double cv_l = 0, cv_nl = 0;
  };
  std::vector<Row> rows;
  StudyResult result;
  for (double d : cfg.cv_sweep.d_grid) {
    for (double k : cfg.cv_sweep.k_grid) {
      try {
        SourceTerm::affine(k, d, support);
      } catch (const std::invalid_argument&) {
        if (!cfg.cv_sweep.skip_negative_sources) {
          throw ConfigError("cv_sweep", "S(z) = k z + d is negative on the support for (k = " +
                                            fmt(k) + ", d = " + fmt(d) + ")");
        }
        result.report.push_back("skipped (k = " + fmt(k) + ", d = " + fmt(d) +
                                "): S(z) negative on the support");
        continue;
      }
      rows.push_back({"source_grid", "k", k, k, d, cfg.model});
    }
  }
  const char* names[] = {"a", "b", "c"};
  for (int which = 0; which < 3; ++which) {
    for (double v : cfg.cv_sweep.abc_grid) {
      ModelParams params = cfg.model;
      (which == 0 ? params.a : which == 1 ? params.b : params.c) = v;
      rows.push_back({"rate_grid", names[which], v, cfg.cv_sweep.rate_k, cfg.cv_sweep.rate_d, params});
    }
  }

  parallel_for(rows.size(), cfg.threads, [&](std::size_t i) {
    Row& row = rows[i];
    const SourceTerm source = SourceTerm::affine(row.k, row.d, support);
    row.cv_l = cv_linear(row.params, source, quad);
    row.cv_nl = cv_nonlinear(row.params, source, quad);
  });

  Table table({"grid", "sweep", "sweep_value", "k", "d", "a", "b", "c", "k_sq_over_2",
               "true_variance", "cv_linear", "cv_nonlinear", "diff"});
  int negative = 0;
  for (const Row& r : rows) {
    const double diff = r.cv_l - r.cv_nl;
    if (diff < -kCvTolerance) ++negative;
    table.add_row({r.grid, r.sweep, fmt(r.sweep_value), fmt(r.k), fmt(r.d), fmt(r.params.a),
                   fmt(r.params.b), fmt(r.params.c), fmt(r.k * r.k / 2.0),
                   fmt(r.k * r.k * var_z), fmt(r.cv_l), fmt(r.cv_nl), fmt(diff)});
  }

  // trends on the k-d grid
  std::map<double, std::vector<std::pair<double, double>>> by_d, by_k;
  for (const Row& r : rows) {
    if (r.grid != "source_grid") continue;
    by_d[r.d].push_back({r.k, r.cv_l - r.cv_nl});
    by_k[r.k].push_back({r.d, r.cv_l - r.cv_nl});
  }
  bool trend_k = true, trend_d = true;
  for (auto& [d, series] : by_d) {
    std::sort(series.begin(), series.end());
    for (std::size_t i = 1; i < series.size(); ++i) {
      if (series[i].second < series[i - 1].second - kCvTolerance) trend_k = false;
    }
  }
  for (auto& [k, series] : by_k) {
    std::sort(series.begin(), series.end());
    for (std::size_t i = 1; i < series.size(); ++i) {
      if (series[i].second > series[i - 1].second + kCvTolerance) trend_d = false;
    }
  }

  result.report.push_back("rows: " + std::to_string(rows.size()) +
                          ", CV_L - CV_NL < 0 at " + std::to_string(negative) + " rows");
  result.report.push_back(std::string("diff nondecreasing in k for every d: ") +
                          (trend_k ? "yes" : "NO"));
  result.report.push_back(std::string("diff nonincreasing in d for every k: ") +
                          (trend_d ? "yes" : "NO"));
  result.exit_code = negative > 0 ? kExitFailure : (trend_k && trend_d) ? kExitOk : kExitWarning;
  result.tables.emplace_back("cv_sweep.csv", std::move(table));
  result.charts.push_back({"cv_source_grid.svg", "cv_sweep.csv", "CV_L - CV_NL against Var[S]",
                           "true_variance", {"diff"}, false, "d", "grid", "source_grid"});
  result.charts.push_back({"cv_rate_grid.svg", "cv_sweep.csv", "CV_L - CV_NL against a, b, c",
                           "sweep_value", {"diff"}, false, "sweep", "grid", "rate_grid"});
  return result;
}

// ---------------------------------------------------------------------------

StudyResult run_check(const RunConfig& cfg) {
  cfg.validate();
  const Problem prob = make_problem(cfg);
  const auto& p = prob.params;
  const int K = cfg.galerkin.K;
  const QuadratureRule gquad = build_quadrature(prob.measure, cfg.galerkin_quad_nodes());
  const BasisFamily basis = build_basis(prob.measure, gquad, K);

  const KappaReport kappa =
      estimate_kappa(prob.source, p, prob.measure, cfg.check.max_order, cfg.check.grid_size);
  const TheoremConstants tc = theorem_constants(kappa, basis.growth_exponent(), p,
                                                prob.measure.support());
  const GrowthReport growth = check_basis_growth(basis, cfg.check.grid_size);

  StudyResult result;
  Table conditions({"condition", "lhs", "rhs", "pass", "margin"});
  bool all_pass = true;
  auto add = [&](const ConditionCheck& c) {
    conditions.add_row({c.id, fmt(c.lhs), fmt(c.rhs), pass_text(c.pass), fmt(c.margin)});
    all_pass = all_pass && c.pass;
  };

  ConditionCheck regularity{"rinf_regularity", 0.0, 1.0, true, 1.0};
  if (kappa.kappa > 0.0) {
    for (int i = 0; i <= kappa.max_order; ++i) {
      regularity.lhs =
          std::max(regularity.lhs, kappa.per_order_max[i] / std::pow(kappa.kappa, i + 1.0));
    }
  }
  regularity.margin = regularity.rhs - regularity.lhs;
  regularity.pass = regularity.lhs <= regularity.rhs * (1.0 + 1e-12);
  add(regularity);
  add({"rinf_positive", 0.0, kappa.r, kappa.r > 0.0, kappa.r});
  add({"basis_growth", growth.worst_ratio, 1.0 + 1e-6, growth.pass, 1.0 + 1e-6 - growth.worst_ratio});

  const Eigen::VectorXd rinf_coeffs =
      project([&](double z) { return steady_state_r(p, prob.source, z); }, basis, gquad);
  try {
    add(check_stability_condition(rinf_coeffs, tc.q));
  } catch (const std::invalid_argument& e) {
    add({"stability_rinf", NAN, NAN, false, NAN});
    result.report.push_back(std::string("stability condition not evaluable: ") + e.what());
  }

  Table constants({"name", "value"});
  auto constant = [&](const char* name, double v) { constants.add_row({name, fmt(v)}); };
  constant("A", tc.A);
  constant("kappa", tc.kappa);
  constant("r", tc.r);
  constant("R", tc.R);
  constant("L", tc.L);
  constant("nu", tc.nu);
  constant("p", tc.p);
  constant("q", tc.q);
  constant("growth_constant", basis.growth_constant());
  constant("strict_growth_exponent", growth.smallest_strict_exponent);
  constant("C0_sens", tc.C0_sens);
  constant("C0_spec", tc.C0_spec);
  constant("C0_hat", tc.C0_hat);
  constant("C0_hat_spec", tc.C0_hat_spec);
  constant("C_S", tc.C_S);
  constant("I0", tc.I0);

  const double a2 = p.a * p.a, b2 = p.b * p.b, c2 = p.c * p.c;
  Table thresholds({"name", "value"});
  auto threshold = [&](const char* name, double v) { thresholds.add_row({name, fmt(v)}); };
  threshold("l2_rho0_sq", b2 / (4 * c2));
  threshold("l2_m0_sq", a2 / (4 * c2));
  threshold("hn_rho0_sq_sens", b2 * tc.C0_sens);
  threshold("hn_m0_sq_sens", a2 * tc.C0_sens);
  threshold("hn_rho0_sq_spec", b2 * tc.C0_spec);
  threshold("hn_m0_sq_spec", a2 * tc.C0_spec);
  threshold("mu_rho0_sq_stab", b2 * tc.C0_hat);
  threshold("mu_m0_sq_stab", a2 * tc.C0_hat);
  threshold("mu_rho0_sq_spec", b2 * tc.C0_hat_spec);
  threshold("mu_m0_sq_spec", a2 * tc.C0_hat_spec);

  Table orders({"order", "sup_scaled_derivative", "kappa_order", "margin"});
  for (int i = 0; i <= kappa.max_order; ++i) {
    orders.add_row({std::to_string(i), fmt(kappa.per_order_max[i]), fmt(kappa.per_order_kappa[i]),
                    fmt(kappa.margins[i])});
  }

  if (kappa.degenerate) {
    result.report.push_back("DEGENERATE: r_inf vanishes on the support, L and nu are infinite");
  }
  if (!growth.strict_pass) {
    result.report.push_back("note: basis exceeds (i+1)^p without the constant " +
                            fmt(basis.growth_constant()) + "; smallest strict exponent " +
                            fmt(growth.smallest_strict_exponent));
  }
  for (std::size_t r = 0; r < conditions.row_count(); ++r) {
    const auto& row = conditions.rows()[r];
    result.report.push_back(row[0] + ": lhs " + row[1] + ", rhs " + row[2] + " -> " +
                            (row[3] == "true" ? "pass" : "FAIL"));
  }
  for (std::size_t r = 0; r < constants.row_count(); ++r) {
    result.report.push_back(constants.rows()[r][0] + " = " + constants.rows()[r][1]);
  }
  for (std::size_t r = 0; r < thresholds.row_count(); ++r) {
    result.report.push_back("threshold " + thresholds.rows()[r][0] + " = " +
                            thresholds.rows()[r][1]);
  }

  result.exit_code = all_pass ? kExitOk : kExitFailure;
  result.tables.emplace_back("conditions.csv", std::move(conditions));
  result.tables.emplace_back("constants.csv", std::move(constants));
  result.tables.emplace_back("thresholds.csv", std::move(thresholds));
  result.tables.emplace_back("kappa_orders.csv", std::move(orders));
  return result;
}

// ---------------------------------------------------------------------------

StudyResult run_tensors(const RunConfig& cfg) {
  cfg.validate();
  const Problem prob = make_problem(cfg);
  const int K = cfg.galerkin.K;
  const QuadratureRule gquad = build_quadrature(prob.measure, cfg.galerkin_quad_nodes());
  const BasisFamily basis = build_basis(prob.measure, gquad, K);
  const GalerkinTensors tensors = assemble_tensors(basis, gquad, prob.params, prob.source);
  const KappaReport bounds =
      estimate_kappa(prob.source, prob.params, prob.measure, 0, cfg.check.grid_size);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tensors.upsilon, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues();
  const double lo = bounds.r - 1e-8, hi = bounds.R + 1e-8;
  const bool inside = ev.minCoeff() >= lo && ev.maxCoeff() <= hi;

  Table triple({"l", "i", "j", "value"});
  for (int l = 0; l <= K; ++l)
    for (int i = 0; i <= K; ++i)
      for (int j = 0; j <= K; ++j)
        triple.add_row({std::to_string(l), std::to_string(i), std::to_string(j),
                        fmt(tensors.triple(l, i, j))});
  Table upsilon({"i", "j", "value"});
  for (int i = 0; i <= K; ++i)
    for (int j = 0; j <= K; ++j)
      upsilon.add_row({std::to_string(i), std::to_string(j), fmt(tensors.upsilon(i, j))});
  Table eigen({"index", "eigenvalue"});
  for (Eigen::Index i = 0; i < ev.size(); ++i) eigen.add_row({std::to_string(i), fmt(ev[i])});
  Table summary({"name", "value"});
  summary.add_row({"min_eigenvalue", fmt(ev.minCoeff())});
  summary.add_row({"max_eigenvalue", fmt(ev.maxCoeff())});
  summary.add_row({"r", fmt(bounds.r)});
  summary.add_row({"R", fmt(bounds.R)});
  summary.add_row({"spectrum_inside", pass_text(inside)});

  StudyResult result;
  result.report.push_back("Upsilon spectrum [" + fmt(ev.minCoeff()) + ", " + fmt(ev.maxCoeff()) +
                          "] within [r, R] = [" + fmt(bounds.r) + ", " + fmt(bounds.R) +
                          "] +- 1e-8: " + (inside ? "yes" : "NO"));
  result.exit_code = inside ? kExitOk : kExitFailure;
  result.tables.emplace_back("triple.csv", std::move(triple));
  result.tables.emplace_back("upsilon.csv", std::move(upsilon));
  result.tables.emplace_back("upsilon_eigenvalues.csv", std::move(eigen));
  result.tables.emplace_back("upsilon_summary.csv", std::move(summary));
  result.charts.push_back({"upsilon_eigenvalues.svg", "upsilon_eigenvalues.csv",
                           "Upsilon eigenvalues", "index", {"eigenvalue"}, false, "", "", ""});
  return result;
}

}  // namespace gpcsg
