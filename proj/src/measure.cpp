#include "gpcsg/measure.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpcsg {

namespace {

constexpr double kBreakdownTolerance = 1e-13;
constexpr int kFinePanels = 64;
constexpr int kFinePanelOrder = 20;

Recurrence legendre_recurrence(int n) {
  Recurrence rec;
  rec.alpha.assign(n + 1, 0.0);
  rec.beta.resize(n + 1);
  rec.beta[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k) * k;
    rec.beta[k] = kk / (4.0 * kk - 1.0);
  }
  return rec;
}

Recurrence chebyshev_recurrence(int n) {
  Recurrence rec;
  rec.alpha.assign(n + 1, 0.0);
  rec.beta.assign(n + 1, 0.25);
  rec.beta[0] = 1.0;
  if (n >= 1) rec.beta[1] = 0.5;
  return rec;
}

// Composite Gauss-Legendre rule in theta for integrals of f(cos theta) sin theta
// over [0, pi], i.e. integrals of f(t) dt over [-1, 1]. The substitution keeps
// arcsine-type endpoint singularities integrable to full precision.
void theta_rule(std::vector<double>& t_nodes, std::vector<double>& dt_weights) {
  const QuadratureRule panel = gauss_from_recurrence(legendre_recurrence(kFinePanelOrder),
                                                     kFinePanelOrder);
  const double h = std::numbers::pi / kFinePanels;
  t_nodes.clear();
  dt_weights.clear();
  for (int p = 0; p < kFinePanels; ++p) {
    const double left = p * h;
    for (int q = 0; q < panel.order(); ++q) {
      const double theta = left + 0.5 * h * (panel.nodes[q] + 1.0);
      // panel weights sum to one, so the theta-measure of the panel is h
      t_nodes.push_back(std::cos(theta));
      dt_weights.push_back(h * panel.weights[q] * std::sin(theta));
    }
  }
}

double reference_mass(const Measure::Density& ref_density) {
  std::vector<double> t, w;
  theta_rule(t, w);
  double mass = 0.0;
  for (std::size_t q = 0; q < t.size(); ++q) mass += w[q] * ref_density(t[q]);
  return mass;
}

void validate_interval(double lower, double upper) {
  if (!(std::isfinite(lower) && std::isfinite(upper)) || !(lower < upper)) {
    throw std::invalid_argument("measure: degenerate interval, need lower < upper");
  }
}

}  // namespace

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Uniform:
      return "uniform";
    case MeasureKind::Chebyshev:
      return "chebyshev";
    case MeasureKind::Custom:
      return "custom";
  }
  return "unknown";
}

MeasureKind measure_kind_from_string(std::string_view name) {
  if (name == "uniform") return MeasureKind::Uniform;
  if (name == "chebyshev") return MeasureKind::Chebyshev;
  if (name == "custom") return MeasureKind::Custom;
  throw std::invalid_argument("measure: unsupported kind '" + std::string(name) + "'");
}

Measure::Measure(MeasureKind kind, Interval support, Density reference_density)
    : kind_(kind),
      support_(support),
      reference_density_(std::make_shared<const Density>(std::move(reference_density))) {}

double Measure::density(double z) const {
  if (z < support_.lower || z > support_.upper) return 0.0;
  return (*reference_density_)(to_reference(z)) / support_.half_width();
}

Recurrence Measure::recurrence(int n) const {
  if (n < 0) throw std::invalid_argument("recurrence: negative degree");
  switch (kind_) {
    case MeasureKind::Uniform:
      return legendre_recurrence(n);
    case MeasureKind::Chebyshev:
      return chebyshev_recurrence(n);
    case MeasureKind::Custom:
      break;
  }

  // Discretized Stieltjes procedure on the fine reference rule.
  const auto& x = *fine_nodes_;
  const auto& w = *fine_weights_;
  if (n + 1 >= static_cast<int>(x.size())) {
    throw std::invalid_argument("recurrence: degree exceeds the fine discretization");
  }
  Recurrence rec;
  rec.alpha.resize(n + 1);
  rec.beta.resize(n + 1);
  rec.beta[0] = 1.0;
  std::vector<double> p_prev(x.size(), 0.0), p(x.size(), 1.0), v(x.size());
  for (int k = 0; k <= n; ++k) {
    double a = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) a += w[q] * x[q] * p[q] * p[q];
    rec.alpha[k] = a;
    if (k == n) break;
    const double sb = std::sqrt(rec.beta[k]);
    double b = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) {
      v[q] = (x[q] - a) * p[q] - (k > 0 ? sb * p_prev[q] : 0.0);
      b += w[q] * v[q] * v[q];
    }
    if (!(b > kBreakdownTolerance)) {
      throw std::runtime_error("recurrence: Stieltjes breakdown at degree " +
                               std::to_string(k + 1));
    }
    rec.beta[k + 1] = b;
    const double inv = 1.0 / std::sqrt(b);
    for (std::size_t q = 0; q < x.size(); ++q) {
      p_prev[q] = p[q];
      p[q] = v[q] * inv;
    }
  }
  return rec;
}

Measure build_measure(MeasureKind kind, double lower, double upper) {
  validate_interval(lower, upper);
  Measure::Density ref;
  switch (kind) {
    case MeasureKind::Uniform:
      ref = [](double t) { return (t >= -1.0 && t <= 1.0) ? 0.5 : 0.0; };
      break;
    case MeasureKind::Chebyshev:
      ref = [](double t) {
        if (!(t > -1.0 && t < 1.0)) return t == 1.0 || t == -1.0 ? INFINITY : 0.0;
        return 1.0 / (std::numbers::pi * std::sqrt(1.0 - t * t));
      };
      break;
    case MeasureKind::Custom:
      throw std::invalid_argument("measure: custom measures need a density (use custom_measure)");
  }
  const double mass = reference_mass(ref);
  if (std::abs(mass - 1.0) > 1e-12) {
    throw std::logic_error("measure: density not normalized");
  }
  return Measure(kind, Interval{lower, upper}, std::move(ref));
}

Measure custom_measure(double lower, double upper, Measure::Density density) {
  validate_interval(lower, upper);
  if (!density) throw std::invalid_argument("measure: empty density");
  const Interval support{lower, upper};
  const double half = support.half_width();
  const double mid = support.midpoint();
  auto raw = [density, half, mid](double t) { return density(mid + half * t) * half; };

  std::vector<double> t, w;
  theta_rule(t, w);
  double mass = 0.0;
  for (std::size_t q = 0; q < t.size(); ++q) {
    const double value = raw(t[q]);
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("measure: density must be finite and nonnegative");
    }
    mass += w[q] * value;
  }
  if (!(mass > 0.0)) throw std::invalid_argument("measure: density has zero mass");

  Measure::Density ref = [raw, mass](double t) { return raw(t) / mass; };
  Measure m(MeasureKind::Custom, support, ref);

  auto nodes = std::make_shared<std::vector<double>>(t);
  auto weights = std::make_shared<std::vector<double>>(w.size());
  for (std::size_t q = 0; q < t.size(); ++q) (*weights)[q] = w[q] * ref(t[q]);
  m.fine_nodes_ = std::move(nodes);
  m.fine_weights_ = std::move(weights);
  return m;
}

QuadratureRule gauss_from_recurrence(const Recurrence& rec, int n_nodes) {
  if (n_nodes < 1) throw std::invalid_argument("quadrature: need at least one node");
  if (rec.size() < n_nodes) throw std::invalid_argument("quadrature: recurrence too short");

  Eigen::VectorXd diag(n_nodes);
  Eigen::VectorXd sub(std::max(n_nodes - 1, 1));
  for (int k = 0; k < n_nodes; ++k) diag[k] = rec.alpha[k];
  for (int k = 1; k < n_nodes; ++k) sub[k - 1] = std::sqrt(rec.beta[k]);

  std::vector<double> nodes(n_nodes);
  if (n_nodes == 1) {
    nodes[0] = rec.alpha[0];
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n_nodes - 1), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("quadrature: Jacobi eigenvalue solve failed");
    }
    for (int k = 0; k < n_nodes; ++k) nodes[k] = solver.eigenvalues()[k];
  }

  // Evaluates p_0..p_{n-1} (orthonormal) plus the unnormalized degree-n
  // polynomial u = sqrt(beta_n) p_n and its derivative.
  auto evaluate = [&](double t, double& u, double& du, double& christoffel) {
    double p_prev = 0.0, p = 1.0, dp_prev = 0.0, dp = 0.0;
    christoffel = 1.0;
    for (int k = 0; k < n_nodes; ++k) {
      const double sb = k > 0 ? std::sqrt(rec.beta[k]) : 0.0;
      const double next = (t - rec.alpha[k]) * p - sb * p_prev;
      const double dnext = p + (t - rec.alpha[k]) * dp - sb * dp_prev;
      if (k == n_nodes - 1) {
        u = next;
        du = dnext;
        break;
      }
      const double inv = 1.0 / std::sqrt(rec.beta[k + 1]);
      p_prev = p;
      dp_prev = dp;
      p = next * inv;
      dp = dnext * inv;
      christoffel += p * p;
    }
  };

  QuadratureRule rule;
  rule.support = Interval{-1.0, 1.0};
  rule.nodes.resize(n_nodes);
  rule.weights.resize(n_nodes);
  for (int k = 0; k < n_nodes; ++k) {
    double t = nodes[k], u = 0.0, du = 0.0, ch = 1.0;
    for (int it = 0; it < 4; ++it) {
      evaluate(t, u, du, ch);
      if (du == 0.0) break;
      const double step = u / du;
      t -= step;
      if (std::abs(step) < 1e-17) break;
    }
    evaluate(t, u, du, ch);
    rule.nodes[k] = t;
    rule.weights[k] = 1.0 / ch;
  }
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

QuadratureRule build_quadrature(const Measure& measure, int n_nodes) {
  if (n_nodes < 1) throw std::invalid_argument("quadrature: need at least one node");

  QuadratureRule ref;
  if (measure.kind() == MeasureKind::Chebyshev) {
    ref.nodes.resize(n_nodes);
    ref.weights.assign(n_nodes, 1.0 / n_nodes);
    for (int k = 0; k < n_nodes; ++k) {
      ref.nodes[k] = -std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n_nodes));
    }
    // symmetric pairs come out as -x and x up to rounding; enforce exactly
    for (int k = 0; k < n_nodes / 2; ++k) ref.nodes[n_nodes - 1 - k] = -ref.nodes[k];
    if (n_nodes % 2 == 1) ref.nodes[n_nodes / 2] = 0.0;
  } else {
    ref = gauss_from_recurrence(measure.recurrence(n_nodes), n_nodes);
  }

  QuadratureRule rule;
  rule.support = measure.support();
  rule.weights = ref.weights;
  rule.nodes.resize(n_nodes);
  for (int k = 0; k < n_nodes; ++k) rule.nodes[k] = measure.from_reference(ref.nodes[k]);
  if (!std::is_sorted(rule.nodes.begin(), rule.nodes.end())) {
    throw std::runtime_error("quadrature: nodes not ascending");
  }
  for (int k = 0; k < n_nodes; ++k) {
    if (!(rule.nodes[k] > rule.support.lower && rule.nodes[k] < rule.support.upper) ||
        !(rule.weights[k] > 0.0)) {
      throw std::runtime_error("quadrature: invalid node or weight produced");
    }
  }
  return rule;
}

}  // namespace gpcsg
