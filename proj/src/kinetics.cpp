#include "gpcsg/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gpcsg {

namespace {

constexpr int kSourceGrid = 10000;
constexpr double kSourceRounding = 1e-14;

}  // namespace

ModelParams::ModelParams(double a_, double b_, double c_) : a(a_), b(b_), c(c_) { validate(); }

void ModelParams::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("model: rate ") + name + " must be positive");
    }
  };
  check(a, "a");
  check(b, "b");
  check(c, "c");
}

SourceTerm::SourceTerm(Kind kind, std::vector<double> coeffs, Interval support)
    : kind_(kind), coeffs_(std::move(coeffs)), support_(support) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  for (double v : coeffs_) {
    if (!std::isfinite(v)) throw std::invalid_argument("source: non-finite coefficient");
  }
  grid_min_ = (*this)(support_.lower);
  for (int g = 1; g < kSourceGrid; ++g) {
    const double z = g + 1 == kSourceGrid
                         ? support_.upper
                         : support_.lower + support_.length() * g / (kSourceGrid - 1);
    grid_min_ = std::min(grid_min_, (*this)(z));
  }
  if (grid_min_ < -kSourceRounding) {
    throw std::invalid_argument("source: S(z) is negative on the support (min " +
                                std::to_string(grid_min_) + ")");
  }
}

SourceTerm SourceTerm::affine(double k, double d, Interval support) {
  return SourceTerm(Kind::Affine, {d, k}, support);
}

SourceTerm SourceTerm::polynomial(std::vector<double> coeffs, Interval support) {
  return SourceTerm(Kind::Polynomial, std::move(coeffs), support);
}

double SourceTerm::operator()(double z) const {
  double value = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) value = value * z + *it;
  return value;
}

bool SourceTerm::is_constant() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double v) { return v == 0.0; });
}

StateZ full_rhs(const StateZ& s, double source_value, const ModelParams& p) {
  const double binding = p.c * s.rho * s.m;
  return {source_value - p.a * s.rho - binding, source_value - p.b * s.m - binding};
}

StateZ full_rhs(const StateZ& s, double z, const ModelParams& p, const SourceTerm& source) {
  return full_rhs(s, source(z), p);
}

double steady_state_r(const ModelParams& p, double source_value) {
  if (source_value < 0.0) {
    if (source_value < -kSourceRounding) {
      throw std::domain_error("steady state: negative source " + std::to_string(source_value));
    }
    source_value = 0.0;
  }
  const double ab = p.a * p.b;
  const double delta = 1.0 + 4.0 * p.c * source_value / ab;
  return 2.0 * source_value / (ab * (1.0 + std::sqrt(delta)));
}

double steady_state_r(const ModelParams& p, const SourceTerm& source, double z) {
  return steady_state_r(p, source(z));
}

SteadyState steady_state(const ModelParams& p, double source_value) {
  const double r = steady_state_r(p, source_value);
  return {r, p.b * r, p.a * r};
}

StateZ perturb_rhs(const StateZ& s, double r_inf, const ModelParams& p) {
  const double binding = p.c * s.rho * s.m;
  return {-(p.a + p.a * p.c * r_inf) * s.rho - p.b * p.c * r_inf * s.m - binding,
          -(p.b + p.b * p.c * r_inf) * s.m - p.a * p.c * r_inf * s.rho - binding};
}

double linear_rhs(double rho, double source_value, const ModelParams& p) {
  return source_value - p.a * rho;
}

double linear_rhs(double rho, double z, const ModelParams& p, const SourceTerm& source) {
  return linear_rhs(rho, source(z), p);
}

double linear_steady_state(const ModelParams& p, double source_value) {
  return source_value / p.a;
}

}  // namespace gpcsg
