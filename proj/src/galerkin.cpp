#include "gpcsg/galerkin.hpp"

#include "gpcsg/table.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gpcsg {

TripleTensor::TripleTensor(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0) throw std::invalid_argument("triple tensor: negative degree");
  const std::size_t n = static_cast<std::size_t>(max_degree + 1);
  data_.assign(n * n * n, 0.0);
}

Eigen::MatrixXd TripleTensor::slice(int l) const {
  Eigen::MatrixXd s(size(), size());
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j) s(i, j) = (*this)(l, i, j);
  return s;
}

GalerkinState GalerkinState::zero(int K) {
  return {Eigen::VectorXd::Zero(K + 1), Eigen::VectorXd::Zero(K + 1), 0.0};
}

Eigen::VectorXd GalerkinState::packed() const {
  if (rho_hat.size() != m_hat.size()) {
    throw std::invalid_argument("galerkin state: rho_hat and m_hat lengths differ");
  }
  Eigen::VectorXd out(rho_hat.size() * 2);
  out << rho_hat, m_hat;
  return out;
}

GalerkinState GalerkinState::unpack(const Eigen::VectorXd& packed, double t) {
  if (packed.size() % 2 != 0) throw std::invalid_argument("galerkin state: odd packed length");
  const Eigen::Index n = packed.size() / 2;
  return {packed.head(n), packed.tail(n), t};
}

int min_triple_quadrature_order(int K) { return (3 * K + 2) / 2; }

int default_quadrature_order(int K) { return 2 * K + 10; }

TripleTensor assemble_triple(const BasisFamily& basis, const QuadratureRule& quadrature) {
  const int K = basis.max_degree();
  if (quadrature.order() < min_triple_quadrature_order(K)) {
    throw std::invalid_argument("triple tensor: quadrature order " +
                                std::to_string(quadrature.order()) + " cannot integrate degree " +
                                std::to_string(3 * K) + " exactly");
  }
  const Eigen::MatrixXd v = vandermonde(basis, quadrature);
  TripleTensor s(K);
  for (int l = 0; l <= K; ++l) {
    for (int i = l; i <= K; ++i) {
      for (int j = i; j <= K; ++j) {
        double sum = 0.0;
        for (int q = 0; q < quadrature.order(); ++q) {
          sum += quadrature.weights[q] * v(q, l) * v(q, i) * v(q, j);
        }
        // fill every permutation from the single sorted evaluation
        s(l, i, j) = s(l, j, i) = s(i, l, j) = s(i, j, l) = s(j, l, i) = s(j, i, l) = sum;
      }
    }
  }
  return s;
}

UpsilonMatrix assemble_upsilon(const BasisFamily& basis, const QuadratureRule& quadrature,
                               const ModelParams& params, const SourceTerm& source) {
  const int K = basis.max_degree();
  if (quadrature.order() < min_triple_quadrature_order(K)) {
    throw std::invalid_argument("upsilon: quadrature order too low for degree " +
                                std::to_string(K));
  }
  const Eigen::MatrixXd v = vandermonde(basis, quadrature);
  Eigen::VectorXd weighted(quadrature.order());
  for (int q = 0; q < quadrature.order(); ++q) {
    weighted[q] = quadrature.weights[q] * steady_state_r(params, source, quadrature.nodes[q]);
  }
  UpsilonMatrix u = v.transpose() * weighted.asDiagonal() * v;
  // exact symmetry
  return 0.5 * (u + u.transpose());
}

GalerkinTensors assemble_tensors(const BasisFamily& basis, const QuadratureRule& quadrature,
                                 const ModelParams& params, const SourceTerm& source) {
  return {assemble_triple(basis, quadrature),
          assemble_upsilon(basis, quadrature, params, source)};
}

Eigen::VectorXd project(const std::function<double(double)>& f, const BasisFamily& basis,
                        const QuadratureRule& quadrature) {
  Eigen::VectorXd nodal(quadrature.order());
  for (int q = 0; q < quadrature.order(); ++q) nodal[q] = f(quadrature.nodes[q]);
  return project_nodal(nodal, basis, quadrature);
}

Eigen::VectorXd project_nodal(const Eigen::VectorXd& nodal, const BasisFamily& basis,
                              const QuadratureRule& quadrature) {
  if (nodal.size() != quadrature.order()) {
    throw std::invalid_argument("project: nodal values do not match quadrature");
  }
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(basis.size());
  for (int q = 0; q < quadrature.order(); ++q) {
    coeffs += (quadrature.weights[q] * nodal[q]) * basis.eval_all(quadrature.nodes[q]);
  }
  return coeffs;
}

Eigen::VectorXd bilinear_term(const TripleTensor& triple, const Eigen::VectorXd& m_hat,
                              const Eigen::VectorXd& rho_hat) {
  const int n = triple.size();
  if (m_hat.size() != n || rho_hat.size() != n) {
    throw std::invalid_argument("bilinear term: dimension mismatch");
  }
  const int K = n - 1;
  Eigen::VectorXd out(n);
  // Hot loop: l-major contraction, j restricted to |l - i| <= j <= l + i.
  for (int l = 0; l < n; ++l) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      if (m_hat[i] == 0.0) continue;
      const int j_lo = std::abs(l - i);
      const int j_hi = std::min(K, l + i);
      double inner = 0.0;
      for (int j = j_lo; j <= j_hi; ++j) inner += triple(l, i, j) * rho_hat[j];
      acc += m_hat[i] * inner;
    }
    out[l] = acc;
  }
  return out;
}

void galerkin_rhs_packed(const Eigen::VectorXd& packed, Eigen::VectorXd& derivative,
                         const GalerkinTensors& tensors, const ModelParams& p) {
  const Eigen::Index n = tensors.triple.size();
  if (packed.size() != 2 * n || tensors.upsilon.rows() != n || tensors.upsilon.cols() != n) {
    throw std::invalid_argument("galerkin rhs: dimension mismatch");
  }
  const auto rho = packed.head(n);
  const auto m = packed.tail(n);
  const Eigen::VectorXd ups_rho = tensors.upsilon * rho;
  const Eigen::VectorXd ups_m = tensors.upsilon * m;
  const Eigen::VectorXd nonlinear = bilinear_term(tensors.triple, m, rho);

  derivative.resize(2 * n);
  derivative.head(n) = -p.a * rho - p.a * p.c * ups_rho - p.b * p.c * ups_m - p.c * nonlinear;
  derivative.tail(n) = -p.b * m - p.b * p.c * ups_m - p.a * p.c * ups_rho - p.c * nonlinear;
}

GalerkinState galerkin_rhs(const GalerkinState& state, const GalerkinTensors& tensors,
                           const ModelParams& params) {
  Eigen::VectorXd d;
  galerkin_rhs_packed(state.packed(), d, tensors, params);
  return GalerkinState::unpack(d, state.t);
}

void write_triple_csv(std::ostream& out, const TripleTensor& triple) {
  Table t({"l", "i", "j", "value"});
  for (int l = 0; l < triple.size(); ++l)
    for (int i = 0; i < triple.size(); ++i)
      for (int j = 0; j < triple.size(); ++j)
        t.add_row({std::to_string(l), std::to_string(i), std::to_string(j),
                   format_double(triple(l, i, j))});
  t.write_csv(out);
}

void write_upsilon_csv(std::ostream& out, const UpsilonMatrix& upsilon) {
  Table t({"i", "j", "value"});
  for (Eigen::Index i = 0; i < upsilon.rows(); ++i)
    for (Eigen::Index j = 0; j < upsilon.cols(); ++j)
      t.add_row({std::to_string(i), std::to_string(j), format_double(upsilon(i, j))});
  t.write_csv(out);
}

}  // namespace gpcsg
