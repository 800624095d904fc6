#pragma once

#include "gpcsg/measure.hpp"

#include <Eigen/Core>

#include <vector>

namespace gpcsg {

/// Orthonormal polynomial family {Phi_0, ..., Phi_K} for a probability
/// measure, evaluated through its three-term recurrence.
///
/// Growth convention: sup |Phi_i| <= growth_constant * (i+1)^growth_exponent.
/// Normalized Legendre and Chebyshev both need growth_constant = sqrt(2)
/// with exponents 1/2 and 0 respectively.
class BasisFamily {
 public:
  BasisFamily(const Measure& measure, Recurrence recurrence, int max_degree,
              double growth_exponent, double growth_constant);

  int max_degree() const { return max_degree_; }
  int size() const { return max_degree_ + 1; }
  const Interval& support() const { return support_; }
  MeasureKind kind() const { return kind_; }
  const Recurrence& recurrence() const { return recurrence_; }
  double growth_exponent() const { return growth_exponent_; }
  double growth_constant() const { return growth_constant_; }

  /// Phi_degree(z).
  double eval(int degree, double z) const;

  /// (Phi_0(z), ..., Phi_K(z)).
  Eigen::VectorXd eval_all(double z) const;

  /// Row d holds the d-th z-derivatives of Phi_0..Phi_K at z, d = 0..order.
  Eigen::MatrixXd eval_derivatives(double z, int order) const;

  /// Expansion sum_i coeffs[i] Phi_i(z); coeffs may be shorter than K+1.
  double expand(const Eigen::VectorXd& coeffs, double z) const;

 private:
  MeasureKind kind_;
  Interval support_;
  Recurrence recurrence_;
  int max_degree_;
  double growth_exponent_;
  double growth_constant_;
};

/// Orthonormal basis up to degree K. The quadrature must carry at least
/// K+1 nodes so the Gram matrix is integrated exactly; the Gram matrix is
/// checked against the identity and a numerically singular family throws.
BasisFamily build_basis(const Measure& measure, const QuadratureRule& quadrature, int K);

/// Gram matrix G_ij = sum_q w_q Phi_i(z_q) Phi_j(z_q).
Eigen::MatrixXd gram_matrix(const BasisFamily& basis, const QuadratureRule& quadrature);

/// Phi_i(z_q) tabulated as a (nodes x (K+1)) matrix.
Eigen::MatrixXd vandermonde(const BasisFamily& basis, const QuadratureRule& quadrature);

struct GrowthReport {
  std::vector<double> sup_norm;          // max_z |Phi_i(z)| on the grid
  std::vector<double> max_ratio;         // sup_norm / (C (i+1)^p)
  std::vector<double> strict_ratio;      // sup_norm / (i+1)^p, i.e. C = 1
  double worst_ratio = 0.0;
  bool pass = true;                      // declared convention holds
  bool strict_pass = true;               // bound holds with C = 1
  double smallest_strict_exponent = 0.0; // smallest p' with sup <= (i+1)^p'
};

/// Evaluates max |Phi_i| on a dense uniform grid including both endpoints
/// and compares it with the declared growth bound.
GrowthReport check_basis_growth(const BasisFamily& basis, int grid_size = 2001);

}  // namespace gpcsg
