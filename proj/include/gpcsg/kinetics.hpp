#pragma once

#include "gpcsg/measure.hpp"

#include <string>
#include <vector>

namespace gpcsg {

/// Rates of the mRNA / microRNA model: a and b are the degradation rates,
/// c the binding rate. All strictly positive.
struct ModelParams {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;

  ModelParams() = default;
  ModelParams(double a_, double b_, double c_);

  void validate() const;
};

/// Random transcription source S(z), either k z + d or a polynomial in z.
/// Nonnegativity on the support is checked on a 10^4-point grid when the
/// source is constructed.
class SourceTerm {
 public:
  enum class Kind { Affine, Polynomial };

  static SourceTerm affine(double k, double d, Interval support);
  /// coeffs[j] multiplies z^j.
  static SourceTerm polynomial(std::vector<double> coeffs, Interval support);

  Kind kind() const { return kind_; }
  const Interval& support() const { return support_; }
  /// Monomial coefficients (affine sources give {d, k}).
  const std::vector<double>& coefficients() const { return coeffs_; }
  double slope() const { return coeffs_.size() > 1 ? coeffs_[1] : 0.0; }
  double offset() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }

  double operator()(double z) const;
  /// Minimum over the validation grid.
  double grid_minimum() const { return grid_min_; }
  bool is_constant() const;

 private:
  SourceTerm(Kind kind, std::vector<double> coeffs, Interval support);

  Kind kind_;
  std::vector<double> coeffs_;
  Interval support_;
  double grid_min_ = 0.0;
};

/// Pointwise state: unbound mRNA and microRNA contents (or perturbations).
struct StateZ {
  double rho = 0.0;
  double m = 0.0;
};

/// Right-hand side of the full model at one z.
StateZ full_rhs(const StateZ& state, double source_value, const ModelParams& params);
StateZ full_rhs(const StateZ& state, double z, const ModelParams& params,
                const SourceTerm& source);

/// Steady state r = (-1 + sqrt(Delta)) / (2c), Delta = 1 + 4 c S / (a b),
/// evaluated as 2 S / (a b (1 + sqrt(Delta))). Negative S is a domain error;
/// values down to -1e-14 are treated as rounding and clamped to zero.
double steady_state_r(const ModelParams& params, double source_value);
double steady_state_r(const ModelParams& params, const SourceTerm& source, double z);

struct SteadyState {
  double r = 0.0;
  double rho = 0.0;  // b r
  double m = 0.0;    // a r
};
SteadyState steady_state(const ModelParams& params, double source_value);

/// Right-hand side of the perturbation around the steady state r.
StateZ perturb_rhs(const StateZ& perturbation, double r_inf, const ModelParams& params);

/// mRNA equation without microRNA binding.
double linear_rhs(double rho, double source_value, const ModelParams& params);
double linear_rhs(double rho, double z, const ModelParams& params, const SourceTerm& source);
double linear_steady_state(const ModelParams& params, double source_value);

}  // namespace gpcsg
