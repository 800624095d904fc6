#pragma once

#include "gpcsg/basis.hpp"
#include "gpcsg/integrate.hpp"
#include "gpcsg/kinetics.hpp"
#include "gpcsg/measure.hpp"

#include <Eigen/Core>

#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace gpcsg {

/// sum_{i>=1} 1/i^2
inline constexpr double kBaselSum = std::numbers::pi * std::numbers::pi / 6.0;

// ---------------------------------------------------------------------------
// Norms and energies

/// ||f||^2_pi of an expansion, by Parseval.
double l2_pi_norm_sq(const Eigen::VectorXd& coeffs);

/// A function of z together with its z-derivatives up to max_order.
struct DifferentiableFunction {
  int max_order = 0;
  std::function<double(double z, int order)> eval;
};

/// coeffs[j] multiplies z^j; all derivatives available.
DifferentiableFunction polynomial_function(std::vector<double> coeffs);

/// sum_i coeffs[i] Phi_i(z), differentiated through the basis recurrence.
DifferentiableFunction expansion_function(const BasisFamily& basis, Eigen::VectorXd coeffs);

/// sum_{i=0}^{n} int (d^i f / dz^i)^2 pi dz.
double hn_pi_norm_sq(const DifferentiableFunction& f, int n, const QuadratureRule& quadrature);

/// a sum (w_i x_i)^2 + b sum (w_i y_i)^2.
double weighted_energy(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const std::vector<double>& weights, double a, double b);

/// mu_i = (i+1)^q, i = 0..K.
std::vector<double> mu_weights(int K, double q);

/// omega*_i = L^{n-i} (i+1)^2 / (kappa^i i!), i = 0..n.
std::vector<double> omega_star_weights(int n, double kappa, double L);

// ---------------------------------------------------------------------------
// Steady-state regularity

/// d^i r_inf / dz^i at z for i = 0..order, via Taylor arithmetic on
/// sqrt(Delta(z)) for polynomial sources.
std::vector<double> steady_state_derivatives(const ModelParams& params, const SourceTerm& source,
                                             double z, int order);

struct KappaReport {
  double kappa = 0.0;
  double r = 0.0;  // min r_inf on the grid
  double R = 0.0;  // max r_inf on the grid
  int max_order = 0;
  /// max_z (i+1)^2 |d^i r_inf| / i! per order i
  std::vector<double> per_order_max;
  /// per_order_max^(1/(i+1)): the smallest kappa for order i alone
  std::vector<double> per_order_kappa;
  /// kappa^(i+1) - per_order_max
  std::vector<double> margins;
  bool degenerate = false;  // r_inf vanishes somewhere, L and nu blow up
};

/// Smallest kappa with (i+1)^2 |d^i r_inf| <= kappa^(i+1) i! for i <= max_order
/// on a uniform grid over the support, together with r and R.
KappaReport estimate_kappa(const SourceTerm& source, const ModelParams& params,
                           const Measure& measure, int max_order, int grid_size = 2001);

struct TheoremConstants {
  double A = kBaselSum;
  double kappa = 0.0;
  double r = 0.0;
  double R = 0.0;
  double L = 0.0;       // sqrt(16 A kappa^2 / r^2 + 1)
  double nu = 0.0;      // kappa L
  double p = 0.0;       // basis growth exponent
  double q = 2.0;       // p + 2
  double C0_sens = 0.0; // (5^2 2^5 A c^2)^-1, smallness for the decay estimate
  double C0_spec = 0.0; // b/(a+b) (5^2 2^6 nu^2 c^2 A C_S)^-1
  double C0_hat = 0.0;  // (2^{2q+6} c^2 A)^-1, smallness for Galerkin stability
  double C0_hat_spec = 0.0;  // a/(a+b) C0_hat
  double C_S = 0.0;     // max(2/|I|, |I|)
  double I0 = 0.0;      // 32 c^2 R^2 + 1
  bool degenerate = false;
};

TheoremConstants theorem_constants(const KappaReport& kappa, double growth_exponent,
                                   const ModelParams& params, const Interval& support);

// ---------------------------------------------------------------------------
// Condition checks

struct ConditionCheck {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  double margin = 0.0;  // rhs - lhs
};

/// sum_{j>=1} ((j+1)^q r_j)^2 <= r_0^2 / (2^{2q+3} A) for r_j = <r_inf, Phi_j>.
ConditionCheck check_stability_condition(const Eigen::VectorXd& rinf_coeffs, double q,
                                         double A = kBaselSum);

// ---------------------------------------------------------------------------
// Decay fitting

struct DecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of log(energy) against t on [t1, t2]; rate = -slope.
DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& energies,
                        double t1, double t2);

DecayFit fit_decay_rate(const Trajectory& trajectory,
                        const std::function<double(const Eigen::VectorXd&)>& energy, double t1,
                        double t2);

// ---------------------------------------------------------------------------
// Coefficient of variation

/// sqrt(second_moment - mean^2) / mean. Negative variance down to
/// -1e-14 mean^2 is rounding and clamps to zero.
double cv(double mean, double second_moment);

/// CV of the steady state S(z)/a of the model without microRNA.
double cv_linear(const ModelParams& params, const SourceTerm& source,
                 const QuadratureRule& quadrature);

/// CV of the steady state b r_inf(z) of the full model.
double cv_nonlinear(const ModelParams& params, const SourceTerm& source,
                    const QuadratureRule& quadrature);

}  // namespace gpcsg
