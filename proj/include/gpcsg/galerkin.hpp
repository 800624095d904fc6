#pragma once

#include "gpcsg/basis.hpp"
#include "gpcsg/kinetics.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <vector>

namespace gpcsg {

/// Dense triple-product tensor S(l, i, j) = <Phi_i Phi_j Phi_l>_pi.
class TripleTensor {
 public:
  explicit TripleTensor(int max_degree);

  int max_degree() const { return max_degree_; }
  int size() const { return max_degree_ + 1; }

  double operator()(int l, int i, int j) const { return data_[index(l, i, j)]; }
  double& operator()(int l, int i, int j) { return data_[index(l, i, j)]; }

  /// Slice S^l as a (K+1) x (K+1) matrix.
  Eigen::MatrixXd slice(int l) const;

 private:
  std::size_t index(int l, int i, int j) const {
    const std::size_t n = static_cast<std::size_t>(size());
    return (static_cast<std::size_t>(l) * n + static_cast<std::size_t>(i)) * n +
           static_cast<std::size_t>(j);
  }

  int max_degree_;
  std::vector<double> data_;
};

/// Upsilon_ij = <r_inf Phi_i Phi_j>_pi.
using UpsilonMatrix = Eigen::MatrixXd;

struct GalerkinTensors {
  TripleTensor triple;
  UpsilonMatrix upsilon;
};

/// Coefficient vectors of the Galerkin approximation of the perturbation.
struct GalerkinState {
  Eigen::VectorXd rho_hat;
  Eigen::VectorXd m_hat;
  double t = 0.0;

  static GalerkinState zero(int K);
  /// [rho_hat; m_hat]
  Eigen::VectorXd packed() const;
  static GalerkinState unpack(const Eigen::VectorXd& packed, double t = 0.0);
};

/// Smallest node count for which Gaussian quadrature integrates degree 3K exactly.
int min_triple_quadrature_order(int K);

/// Default quadrature size serving a degree-K basis.
int default_quadrature_order(int K);

TripleTensor assemble_triple(const BasisFamily& basis, const QuadratureRule& quadrature);

/// Assembled from the exact nodal steady state values.
UpsilonMatrix assemble_upsilon(const BasisFamily& basis, const QuadratureRule& quadrature,
                               const ModelParams& params, const SourceTerm& source);

GalerkinTensors assemble_tensors(const BasisFamily& basis, const QuadratureRule& quadrature,
                                 const ModelParams& params, const SourceTerm& source);

/// coeff_i = sum_q w_q f(z_q) Phi_i(z_q).
Eigen::VectorXd project(const std::function<double(double)>& f, const BasisFamily& basis,
                        const QuadratureRule& quadrature);

/// Discrete projection of nodal values given on the quadrature nodes.
Eigen::VectorXd project_nodal(const Eigen::VectorXd& nodal, const BasisFamily& basis,
                              const QuadratureRule& quadrature);

/// (sum_ij m_i S^l_ij rho_j)_l restricted to the triangle-admissible (i, j).
Eigen::VectorXd bilinear_term(const TripleTensor& triple, const Eigen::VectorXd& m_hat,
                              const Eigen::VectorXd& rho_hat);

/// Time derivative of the Galerkin coefficient system.
GalerkinState galerkin_rhs(const GalerkinState& state, const GalerkinTensors& tensors,
                           const ModelParams& params);

/// In-place variant on packed [rho_hat; m_hat] vectors, for the integrator.
void galerkin_rhs_packed(const Eigen::VectorXd& packed, Eigen::VectorXd& derivative,
                         const GalerkinTensors& tensors, const ModelParams& params);

/// Long-format CSV dumps (l,i,j,value) and (i,j,value).
void write_triple_csv(std::ostream& out, const TripleTensor& triple);
void write_upsilon_csv(std::ostream& out, const UpsilonMatrix& upsilon);

}  // namespace gpcsg
