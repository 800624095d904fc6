#pragma once

#include "gpcsg/galerkin.hpp"
#include "gpcsg/kinetics.hpp"
#include "gpcsg/measure.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gpcsg {

enum class Scheme { RK4, Euler };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

struct IntegratorConfig {
  Scheme scheme = Scheme::RK4;
  double dt = 1e-3;
  double t_end = 10.0;
  int record_every = 10;

  void validate() const;
};

/// Thrown when the state stops being finite.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(long step, double t, double max_abs);

  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

enum class SystemKind { Galerkin, Collocation, Scalar };

std::string_view to_string(SystemKind kind);

/// Recorded samples of a packed state [rho-part; m-part].
struct Trajectory {
  SystemKind system = SystemKind::Scalar;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;

  std::size_t samples() const { return times.size(); }
  Eigen::Index half() const { return states.empty() ? 0 : states.front().size() / 2; }
  Eigen::VectorXd rho(std::size_t sample) const { return states[sample].head(half()); }
  Eigen::VectorXd m(std::size_t sample) const { return states[sample].tail(half()); }

  /// Columns t, then rho_0..rho_{n-1}, m_0..m_{n-1}.
  void write_csv(std::ostream& out) const;
};

using RhsFunction = std::function<void(double t, const Eigen::VectorXd& x, Eigen::VectorXd& dxdt)>;

/// Fixed-step explicit integration. The last step is shortened so that the
/// trajectory ends exactly at t_end; samples are taken at t = 0, every
/// record_every steps, and at t_end.
Trajectory integrate(const RhsFunction& rhs, const Eigen::VectorXd& initial,
                     const IntegratorConfig& config, SystemKind system = SystemKind::Scalar);

/// Explicit-stability heuristic for the step size,
///   dt <= 0.5 / (a + b + c (|rho0| + |m0|) + c R (a + b)).
/// Reported by the tools, never enforced.
double explicit_dt_limit(const ModelParams& params, double r_max, double rho0_norm,
                         double m0_norm);

/// Integrates the Galerkin coefficient system.
Trajectory solve_galerkin(const GalerkinTensors& tensors, const ModelParams& params,
                          const GalerkinState& initial, const IntegratorConfig& config);

/// Solves the exact perturbation system independently at every quadrature
/// node. States are nodal values [rho(z_1..z_Q); m(z_1..z_Q)], ordered by
/// node index whatever the thread count.
Trajectory solve_collocation(const ModelParams& params, const SourceTerm& source,
                             const QuadratureRule& quadrature,
                             const std::function<double(double)>& rho0,
                             const std::function<double(double)>& m0,
                             const IntegratorConfig& config, int threads = 1);

}  // namespace gpcsg
