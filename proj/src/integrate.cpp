#include "gpcsg/integrate.hpp"

#include "gpcsg/parallel.hpp"
#include "gpcsg/table.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace gpcsg {

namespace {

std::string nan_message(long step, double t, double max_abs) {
  std::ostringstream msg;
  msg << "integrate: non-finite state at step " << step << " (t = " << t
      << ", max |component| = " << max_abs << ")";
  return msg.str();
}

}  // namespace

std::string_view to_string(Scheme scheme) { return scheme == Scheme::RK4 ? "rk4" : "euler"; }

Scheme scheme_from_string(std::string_view name) {
  if (name == "rk4") return Scheme::RK4;
  if (name == "euler") return Scheme::Euler;
  throw std::invalid_argument("integrate: unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::Galerkin:
      return "galerkin";
    case SystemKind::Collocation:
      return "collocation";
    case SystemKind::Scalar:
      return "scalar";
  }
  return "unknown";
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time.dt must be positive");
  if (!(t_end >= dt) || !std::isfinite(t_end)) {
    throw std::invalid_argument("time.t_end must be >= time.dt");
  }
  if (record_every < 1) throw std::invalid_argument("time.record_every must be >= 1");
}

IntegrationError::IntegrationError(long step, double t, double max_abs)
    : std::runtime_error(nan_message(step, t, max_abs)), step_(step), time_(t) {}

void Trajectory::write_csv(std::ostream& out) const {
  const Eigen::Index n = half();
  std::vector<std::string> header{"t"};
  for (Eigen::Index i = 0; i < n; ++i) header.push_back("rho_" + std::to_string(i));
  for (Eigen::Index i = 0; i < n; ++i) header.push_back("m_" + std::to_string(i));
  Table table(std::move(header));
  for (std::size_t s = 0; s < samples(); ++s) {
    std::vector<double> row{times[s]};
    row.insert(row.end(), states[s].data(), states[s].data() + states[s].size());
    table.add_row(row);
  }
  table.write_csv(out);
}

Trajectory integrate(const RhsFunction& rhs, const Eigen::VectorXd& initial,
                     const IntegratorConfig& config, SystemKind system) {
  config.validate();
  const long steps = static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));
  const Eigen::Index n = initial.size();

  Trajectory traj;
  traj.system = system;
  traj.times.push_back(0.0);
  traj.states.push_back(initial);

  Eigen::VectorXd x = initial, k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (long step = 1; step <= steps; ++step) {
    const double t0 = (step - 1) * config.dt;
    const double t1 = step == steps ? config.t_end : step * config.dt;
    const double h = t1 - t0;
    if (config.scheme == Scheme::Euler) {
      rhs(t0, x, k1);
      x += h * k1;
    } else {
      rhs(t0, x, k1);
      tmp = x + 0.5 * h * k1;
      rhs(t0 + 0.5 * h, tmp, k2);
      tmp = x + 0.5 * h * k2;
      rhs(t0 + 0.5 * h, tmp, k3);
      tmp = x + h * k3;
      rhs(t1, tmp, k4);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!x.allFinite()) {
      double max_abs = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(x[i])) {
          max_abs = INFINITY;
          break;
        }
        max_abs = std::max(max_abs, std::abs(x[i]));
      }
      throw IntegrationError(step, t1, max_abs);
    }
    if (step % config.record_every == 0 || step == steps) {
      traj.times.push_back(t1);
      traj.states.push_back(x);
    }
  }
  return traj;
}

double explicit_dt_limit(const ModelParams& p, double r_max, double rho0_norm, double m0_norm) {
  return 0.5 / (p.a + p.b + p.c * (rho0_norm + m0_norm) + p.c * r_max * (p.a + p.b));
}

Trajectory solve_galerkin(const GalerkinTensors& tensors, const ModelParams& params,
                          const GalerkinState& initial, const IntegratorConfig& config) {
  auto rhs = [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    galerkin_rhs_packed(x, dx, tensors, params);
  };
  Trajectory traj = integrate(rhs, initial.packed(), config, SystemKind::Galerkin);
  for (double& t : traj.times) t += initial.t;
  return traj;
}

Trajectory solve_collocation(const ModelParams& params, const SourceTerm& source,
                             const QuadratureRule& quadrature,
                             const std::function<double(double)>& rho0,
                             const std::function<double(double)>& m0,
                             const IntegratorConfig& config, int threads) {
  config.validate();
  const int nodes = quadrature.order();
  std::vector<Trajectory> per_node(nodes);
  parallel_for(static_cast<std::size_t>(nodes), threads, [&](std::size_t q) {
    const double z = quadrature.nodes[q];
    const double r_inf = steady_state_r(params, source, z);
    auto rhs = [&params, r_inf](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
      const StateZ d = perturb_rhs({x[0], x[1]}, r_inf, params);
      dx[0] = d.rho;
      dx[1] = d.m;
    };
    Eigen::VectorXd x0(2);
    x0 << rho0(z), m0(z);
    per_node[q] = integrate(rhs, x0, config, SystemKind::Scalar);
  });

  Trajectory traj;
  traj.system = SystemKind::Collocation;
  traj.times = per_node.front().times;
  traj.states.resize(traj.times.size());
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    Eigen::VectorXd packed(2 * nodes);
    for (int q = 0; q < nodes; ++q) {
      packed[q] = per_node[q].states[s][0];
      packed[nodes + q] = per_node[q].states[s][1];
    }
    traj.states[s] = std::move(packed);
  }
  return traj;
}

}  // namespace gpcsg
