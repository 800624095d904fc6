#include "gpcsg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gpcsg {

namespace {

constexpr double kGramTolerance = 1e-8;

}  // namespace

BasisFamily::BasisFamily(const Measure& measure, Recurrence recurrence, int max_degree,
                         double growth_exponent, double growth_constant)
    : kind_(measure.kind()),
      support_(measure.support()),
      recurrence_(std::move(recurrence)),
      max_degree_(max_degree),
      growth_exponent_(growth_exponent),
      growth_constant_(growth_constant) {
  if (max_degree_ < 0) throw std::invalid_argument("basis: negative degree");
  if (recurrence_.size() < max_degree_ + 1) {
    throw std::invalid_argument("basis: recurrence shorter than K+1");
  }
}

double BasisFamily::eval(int degree, double z) const {
  if (degree < 0 || degree > max_degree_) throw std::out_of_range("basis: degree out of range");
  const double t = (z - support_.midpoint()) / support_.half_width();
  double p_prev = 0.0, p = 1.0;
  for (int k = 0; k < degree; ++k) {
    const double sb = k > 0 ? std::sqrt(recurrence_.beta[k]) : 0.0;
    const double next = ((t - recurrence_.alpha[k]) * p - sb * p_prev) /
                        std::sqrt(recurrence_.beta[k + 1]);
    p_prev = p;
    p = next;
  }
  return p;
}

Eigen::VectorXd BasisFamily::eval_all(double z) const {
  Eigen::VectorXd values(size());
  const double t = (z - support_.midpoint()) / support_.half_width();
  values[0] = 1.0;
  for (int k = 0; k < max_degree_; ++k) {
    const double sb = k > 0 ? std::sqrt(recurrence_.beta[k]) : 0.0;
    const double prev = k > 0 ? values[k - 1] : 0.0;
    values[k + 1] = ((t - recurrence_.alpha[k]) * values[k] - sb * prev) /
                    std::sqrt(recurrence_.beta[k + 1]);
  }
  return values;
}

Eigen::MatrixXd BasisFamily::eval_derivatives(double z, int order) const {
  if (order < 0) throw std::invalid_argument("basis: negative derivative order");
  const int n = size();
  const double t = (z - support_.midpoint()) / support_.half_width();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(order + 1, n);
  d(0, 0) = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double sb = k > 0 ? std::sqrt(recurrence_.beta[k]) : 0.0;
    const double inv = 1.0 / std::sqrt(recurrence_.beta[k + 1]);
    for (int r = 0; r <= order; ++r) {
      double v = (t - recurrence_.alpha[k]) * d(r, k);
      if (r > 0) v += r * d(r - 1, k);
      if (k > 0) v -= sb * d(r, k - 1);
      d(r, k + 1) = v * inv;
    }
  }
  // chain rule for the affine map z -> t
  double scale = 1.0;
  for (int r = 1; r <= order; ++r) {
    scale /= support_.half_width();
    d.row(r) *= scale;
  }
  return d;
}

double BasisFamily::expand(const Eigen::VectorXd& coeffs, double z) const {
  if (coeffs.size() > size()) throw std::invalid_argument("basis: too many coefficients");
  if (coeffs.size() == 0) return 0.0;
  return eval_all(z).head(coeffs.size()).dot(coeffs);
}

Eigen::MatrixXd vandermonde(const BasisFamily& basis, const QuadratureRule& quadrature) {
  Eigen::MatrixXd v(quadrature.order(), basis.size());
  for (int q = 0; q < quadrature.order(); ++q) v.row(q) = basis.eval_all(quadrature.nodes[q]);
  return v;
}

Eigen::MatrixXd gram_matrix(const BasisFamily& basis, const QuadratureRule& quadrature) {
  const Eigen::MatrixXd v = vandermonde(basis, quadrature);
  const Eigen::Map<const Eigen::VectorXd> w(quadrature.weights.data(), quadrature.order());
  return v.transpose() * w.asDiagonal() * v;
}

BasisFamily build_basis(const Measure& measure, const QuadratureRule& quadrature, int K) {
  if (K < 0) throw std::invalid_argument("basis: K must be nonnegative");
  if (quadrature.order() < K + 1) {
    throw std::invalid_argument("basis: quadrature order " + std::to_string(quadrature.order()) +
                                " is below K+1 = " + std::to_string(K + 1));
  }

  Recurrence rec = measure.recurrence(K);
  double p = 0.0;
  double constant = 1.0;
  switch (measure.kind()) {
    case MeasureKind::Uniform:
      p = 0.5;
      constant = std::sqrt(2.0);
      break;
    case MeasureKind::Chebyshev:
      p = 0.0;
      constant = std::sqrt(2.0);
      break;
    case MeasureKind::Custom:
      break;
  }
  BasisFamily basis(measure, std::move(rec), K, p, constant);

  const Eigen::MatrixXd gram = gram_matrix(basis, quadrature);
  const double deviation = (gram - Eigen::MatrixXd::Identity(K + 1, K + 1)).cwiseAbs().maxCoeff();
  if (!(deviation <= kGramTolerance)) {
    throw std::runtime_error("basis: Gram matrix deviates from identity by " +
                             std::to_string(deviation));
  }

  if (measure.kind() == MeasureKind::Custom) {
    const GrowthReport report = check_basis_growth(basis);
    return BasisFamily(measure, basis.recurrence(), K, report.smallest_strict_exponent, 1.0);
  }
  return basis;
}

GrowthReport check_basis_growth(const BasisFamily& basis, int grid_size) {
  if (grid_size < 1000) throw std::invalid_argument("growth check: grid_size must be >= 1000");
  const int n = basis.size();
  GrowthReport report;
  report.sup_norm.assign(n, 0.0);
  const Interval& s = basis.support();
  for (int g = 0; g < grid_size; ++g) {
    const double z = g + 1 == grid_size ? s.upper : s.lower + s.length() * g / (grid_size - 1);
    const Eigen::VectorXd v = basis.eval_all(z);
    for (int i = 0; i < n; ++i) report.sup_norm[i] = std::max(report.sup_norm[i], std::abs(v[i]));
  }

  report.max_ratio.resize(n);
  report.strict_ratio.resize(n);
  for (int i = 0; i < n; ++i) {
    const double eta = std::pow(i + 1.0, basis.growth_exponent());
    report.strict_ratio[i] = report.sup_norm[i] / eta;
    report.max_ratio[i] = report.strict_ratio[i] / basis.growth_constant();
    report.worst_ratio = std::max(report.worst_ratio, report.max_ratio[i]);
    if (report.max_ratio[i] > 1.0 + 1e-6) report.pass = false;
    if (report.strict_ratio[i] > 1.0 + 1e-6) report.strict_pass = false;
    if (i >= 1 && report.sup_norm[i] > 1.0) {
      report.smallest_strict_exponent = std::max(
          report.smallest_strict_exponent, std::log(report.sup_norm[i]) / std::log(i + 1.0));
    }
  }
  return report;
}

}  // namespace gpcsg
