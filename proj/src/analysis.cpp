#include "gpcsg/analysis.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

namespace gpcsg {

double l2_pi_norm_sq(const Eigen::VectorXd& coeffs) { return coeffs.squaredNorm(); }

DifferentiableFunction polynomial_function(std::vector<double> coeffs) {
  DifferentiableFunction f;
  f.max_order = std::numeric_limits<int>::max();
  f.eval = [coeffs = std::move(coeffs)](double z, int order) {
    double value = 0.0;
    for (int j = static_cast<int>(coeffs.size()) - 1; j >= order; --j) {
      double falling = 1.0;
      for (int s = 0; s < order; ++s) falling *= j - s;
      value = value * z + falling * coeffs[j];
    }
    return value;
  };
  return f;
}

DifferentiableFunction expansion_function(const BasisFamily& basis, Eigen::VectorXd coeffs) {
  if (coeffs.size() > basis.size()) {
    throw std::invalid_argument("expansion: more coefficients than basis functions");
  }
  DifferentiableFunction f;
  f.max_order = std::numeric_limits<int>::max();
  f.eval = [basis, coeffs = std::move(coeffs)](double z, int order) {
    const Eigen::MatrixXd d = basis.eval_derivatives(z, order);
    return d.row(order).head(coeffs.size()).dot(coeffs);
  };
  return f;
}

double hn_pi_norm_sq(const DifferentiableFunction& f, int n, const QuadratureRule& quadrature) {
  if (n < 0) throw std::invalid_argument("hn norm: negative order");
  if (n > f.max_order) throw std::invalid_argument("hn norm: n exceeds available derivatives");
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    total += quadrature.integrate([&](double z) {
      const double v = f.eval(z, i);
      return v * v;
    });
  }
  return total;
}

double weighted_energy(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const std::vector<double>& weights, double a, double b) {
  const auto n = static_cast<Eigen::Index>(weights.size());
  if (x.size() != n || y.size() != n) {
    throw std::invalid_argument("weighted energy: weight and data lengths differ");
  }
  double ex = 0.0, ey = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wx = weights[i] * x[i];
    const double wy = weights[i] * y[i];
    ex += wx * wx;
    ey += wy * wy;
  }
  return a * ex + b * ey;
}

std::vector<double> mu_weights(int K, double q) {
  std::vector<double> mu(K + 1);
  for (int i = 0; i <= K; ++i) mu[i] = std::pow(i + 1.0, q);
  return mu;
}

std::vector<double> omega_star_weights(int n, double kappa, double L) {
  if (!(kappa > 0.0) || !(L > 0.0)) {
    throw std::invalid_argument("omega weights: kappa and L must be positive");
  }
  std::vector<double> w(n + 1);
  double factorial = 1.0;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) factorial *= i;
    w[i] = std::pow(L, n - i) * (i + 1.0) * (i + 1.0) / (std::pow(kappa, i) * factorial);
  }
  return w;
}

std::vector<double> steady_state_derivatives(const ModelParams& params, const SourceTerm& source,
                                             double z, int order) {
  if (order < 0) throw std::invalid_argument("steady state derivatives: negative order");
  // Taylor coefficients of S at z
  const auto& c = source.coefficients();
  std::vector<double> s(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    double value = 0.0;
    for (int j = static_cast<int>(c.size()) - 1; j >= k; --j) {
      double binom = 1.0;
      for (int t = 0; t < k; ++t) binom = binom * (j - t) / (t + 1);
      value = value * z + binom * c[j];
    }
    s[k] = value;
  }

  std::vector<double> derivs(order + 1, 0.0);
  derivs[0] = steady_state_r(params, s[0]);
  if (order == 0) return derivs;

  const double scale = 4.0 * params.c / (params.a * params.b);
  std::vector<double> delta(order + 1), root(order + 1);
  for (int k = 0; k <= order; ++k) delta[k] = scale * s[k];
  delta[0] += 1.0;
  root[0] = std::sqrt(delta[0]);
  double factorial = 1.0;
  for (int k = 1; k <= order; ++k) {
    double conv = 0.0;
    for (int j = 1; j < k; ++j) conv += root[j] * root[k - j];
    root[k] = (delta[k] - conv) / (2.0 * root[0]);
    factorial *= k;
    derivs[k] = factorial * root[k] / (2.0 * params.c);
  }
  return derivs;
}

KappaReport estimate_kappa(const SourceTerm& source, const ModelParams& params,
                           const Measure& measure, int max_order, int grid_size) {
  if (max_order < 0) throw std::invalid_argument("kappa: negative max order");
  if (grid_size < 2) throw std::invalid_argument("kappa: grid too small");
  KappaReport rep;
  rep.max_order = max_order;
  rep.per_order_max.assign(max_order + 1, 0.0);
  rep.r = INFINITY;
  rep.R = -INFINITY;
  const Interval& s = measure.support();
  for (int g = 0; g < grid_size; ++g) {
    const double z = g + 1 == grid_size ? s.upper : s.lower + s.length() * g / (grid_size - 1);
    const std::vector<double> d = steady_state_derivatives(params, source, z, max_order);
    for (double v : d) {
      if (!std::isfinite(v)) throw std::runtime_error("kappa: derivative evaluation failed");
    }
    rep.r = std::min(rep.r, d[0]);
    rep.R = std::max(rep.R, d[0]);
    double factorial = 1.0;
    for (int i = 0; i <= max_order; ++i) {
      if (i > 0) factorial *= i;
      const double bound = (i + 1.0) * (i + 1.0) * std::abs(d[i]) / factorial;
      rep.per_order_max[i] = std::max(rep.per_order_max[i], bound);
    }
  }

  rep.per_order_kappa.resize(max_order + 1);
  for (int i = 0; i <= max_order; ++i) {
    rep.per_order_kappa[i] = std::pow(rep.per_order_max[i], 1.0 / (i + 1.0));
    rep.kappa = std::max(rep.kappa, rep.per_order_kappa[i]);
  }
  rep.margins.resize(max_order + 1);
  for (int i = 0; i <= max_order; ++i) {
    rep.margins[i] = std::pow(rep.kappa, i + 1.0) - rep.per_order_max[i];
  }
  rep.degenerate = !(rep.r > 0.0);
  return rep;
}

TheoremConstants theorem_constants(const KappaReport& k, double growth_exponent,
                                   const ModelParams& p, const Interval& support) {
  TheoremConstants tc;
  tc.kappa = k.kappa;
  tc.r = k.r;
  tc.R = k.R;
  tc.degenerate = k.degenerate;
  tc.p = growth_exponent;
  tc.q = growth_exponent + 2.0;
  const double A = tc.A;
  const double c2 = p.c * p.c;
  tc.L = tc.degenerate ? INFINITY : std::sqrt(16.0 * A * tc.kappa * tc.kappa / (tc.r * tc.r) + 1.0);
  tc.nu = tc.degenerate ? INFINITY : tc.kappa * tc.L;
  tc.C_S = std::max(2.0 / support.length(), support.length());
  tc.C0_sens = 1.0 / (25.0 * 32.0 * A * c2);
  tc.C0_spec =
      tc.degenerate ? 0.0 : p.b / (p.a + p.b) / (25.0 * 64.0 * tc.nu * tc.nu * c2 * A * tc.C_S);
  tc.C0_hat = 1.0 / (std::pow(2.0, 2.0 * tc.q + 6.0) * c2 * A);
  tc.C0_hat_spec = p.a / (p.a + p.b) * tc.C0_hat;
  tc.I0 = 32.0 * c2 * tc.R * tc.R + 1.0;
  return tc;
}

ConditionCheck check_stability_condition(const Eigen::VectorXd& rinf_coeffs, double q, double A) {
  if (rinf_coeffs.size() == 0 || !(rinf_coeffs[0] > 0.0)) {
    throw std::invalid_argument("stability condition: mean of r_inf must be positive");
  }
  ConditionCheck check;
  check.id = "stability_rinf";
  for (Eigen::Index j = 1; j < rinf_coeffs.size(); ++j) {
    const double term = std::pow(j + 1.0, q) * rinf_coeffs[j];
    check.lhs += term * term;
  }
  check.rhs = rinf_coeffs[0] * rinf_coeffs[0] / (std::pow(2.0, 2.0 * q + 3.0) * A);
  check.margin = check.rhs - check.lhs;
  check.pass = check.lhs <= check.rhs;
  return check;
}

DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& energies,
                        double t1, double t2) {
  if (times.size() != energies.size()) {
    throw std::invalid_argument("decay fit: times and energies differ in length");
  }
  if (!(t2 > t1)) throw std::invalid_argument("decay fit: window needs t2 > t1");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t n = 0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    if (times[s] < t1 || times[s] > t2) continue;
    if (!(energies[s] > 0.0)) {
      throw std::domain_error(
          "decay fit: nonpositive energy at t = " + std::to_string(times[s]) +
          "; the solution reached the rounding floor, shrink the window");
    }
    const double x = times[s];
    const double y = std::log(energies[s]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("decay fit: fewer than two samples in window");
  const double dn = static_cast<double>(n);
  const double cov = sxy - sx * sy / dn;
  const double varx = sxx - sx * sx / dn;
  const double vary = syy - sy * sy / dn;
  const double slope = cov / varx;
  DecayFit fit;
  fit.rate = -slope;
  fit.points = n;
  fit.r_squared = vary > 0.0 ? (cov * cov) / (varx * vary) : 1.0;
  return fit;
}

DecayFit fit_decay_rate(const Trajectory& trajectory,
                        const std::function<double(const Eigen::VectorXd&)>& energy, double t1,
                        double t2) {
  std::vector<double> e;
  e.reserve(trajectory.samples());
  for (const auto& state : trajectory.states) e.push_back(energy(state));
  return fit_decay_rate(trajectory.times, e, t1, t2);
}

double cv(double mean, double second_moment) {
  if (!(mean > 0.0)) throw std::domain_error("cv: mean must be positive");
  double var = second_moment - mean * mean;
  if (var < 0.0) {
    if (var < -1e-14 * mean * mean) throw std::domain_error("cv: negative variance");
    var = 0.0;
  }
  return std::sqrt(var) / mean;
}

namespace {

// Mean and central second moment, accumulated separately so that small
// variances are not lost to cancellation.
double cv_of_nodal(const std::vector<double>& values, const QuadratureRule& quadrature) {
  double mean = 0.0;
  for (int q = 0; q < quadrature.order(); ++q) mean += quadrature.weights[q] * values[q];
  double central = 0.0;
  for (int q = 0; q < quadrature.order(); ++q) {
    const double d = values[q] - mean;
    central += quadrature.weights[q] * d * d;
  }
  return cv(mean, mean * mean + central);
}

}  // namespace

double cv_linear(const ModelParams& params, const SourceTerm& source,
                 const QuadratureRule& quadrature) {
  if (source.is_constant()) {
    if (!(source.offset() > 0.0)) throw std::domain_error("cv: mean must be positive");
    return 0.0;
  }
  std::vector<double> values(quadrature.order());
  for (int q = 0; q < quadrature.order(); ++q) {
    values[q] = linear_steady_state(params, source(quadrature.nodes[q]));
  }
  return cv_of_nodal(values, quadrature);
}

double cv_nonlinear(const ModelParams& params, const SourceTerm& source,
                    const QuadratureRule& quadrature) {
  if (source.is_constant()) {
    if (!(source.offset() > 0.0)) throw std::domain_error("cv: mean must be positive");
    return 0.0;
  }
  std::vector<double> values(quadrature.order());
  for (int q = 0; q < quadrature.order(); ++q) {
    values[q] = steady_state(params, source(quadrature.nodes[q])).rho;
  }
  return cv_of_nodal(values, quadrature);
}

}  // namespace gpcsg
