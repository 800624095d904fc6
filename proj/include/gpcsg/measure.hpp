#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace gpcsg {

/// Closed interval [lower, upper] carrying the random variable z.
struct Interval {
  double lower = -1.0;
  double upper = 1.0;

  double length() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
  double half_width() const { return 0.5 * (upper - lower); }
};

enum class MeasureKind { Uniform, Chebyshev, Custom };

std::string_view to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(std::string_view name);

/// Three-term recurrence coefficients of the polynomials orthonormal with
/// respect to a probability measure on the reference interval [-1, 1]:
///
///   sqrt(beta[k+1]) p_{k+1}(t) = (t - alpha[k]) p_k(t) - sqrt(beta[k]) p_{k-1}(t)
///
/// with p_0 = 1 and beta[0] = 1 (total mass).
struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> beta;

  int size() const { return static_cast<int>(alpha.size()); }
};

/// Probability measure pi(z) dz on a compact interval.
///
/// Internally every measure is described on the reference interval [-1, 1]
/// and mapped affinely onto [lower, upper]. Instances are immutable.
class Measure {
 public:
  using Density = std::function<double(double)>;

  MeasureKind kind() const { return kind_; }
  const Interval& support() const { return support_; }
  double lower() const { return support_.lower; }
  double upper() const { return support_.upper; }

  /// Normalized density at z; zero outside the support.
  double density(double z) const;

  double to_reference(double z) const {
    return (z - support_.midpoint()) / support_.half_width();
  }
  double from_reference(double t) const {
    return support_.midpoint() + support_.half_width() * t;
  }

  /// Recurrence coefficients for degrees 0..n (n+1 entries each).
  Recurrence recurrence(int n) const;

  friend Measure build_measure(MeasureKind, double, double);
  friend Measure custom_measure(double, double, Density);

 private:
  Measure(MeasureKind kind, Interval support, Density reference_density);

  MeasureKind kind_;
  Interval support_;
  // Density of the reference variable t on [-1, 1], normalized to unit mass.
  std::shared_ptr<const Density> reference_density_;
  // Discretized reference measure used by the Stieltjes procedure (Custom only).
  std::shared_ptr<const std::vector<double>> fine_nodes_;
  std::shared_ptr<const std::vector<double>> fine_weights_;
};

/// Uniform or Chebyshev (arcsine) probability measure on [lower, upper].
Measure build_measure(MeasureKind kind, double lower, double upper);

/// Measure with a user-supplied density on [lower, upper]. The density is
/// normalized to unit mass; it must be nonnegative and integrable.
Measure custom_measure(double lower, double upper, Measure::Density density);

/// Gaussian quadrature rule for a probability measure.
struct QuadratureRule {
  std::vector<double> nodes;    // ascending, strictly inside the support
  std::vector<double> weights;  // positive, summing to one
  Interval support;

  int order() const { return static_cast<int>(nodes.size()); }

  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) sum += weights[q] * f(nodes[q]);
    return sum;
  }
};

/// n-point Gaussian rule for the measure (exact for degree <= 2n-1).
QuadratureRule build_quadrature(const Measure& measure, int n_nodes);

/// Golub-Welsch on the Jacobi matrix followed by Newton polishing of the
/// nodes; weights from the Christoffel function. Works on [-1, 1].
QuadratureRule gauss_from_recurrence(const Recurrence& rec, int n_nodes);

}  // namespace gpcsg
