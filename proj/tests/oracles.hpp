#pragma once

// Reference implementations used only by tests: everything here works in the
// complex Hilbert-space picture (2^n x 2^n operators), independent of the
// Pauli-basis code paths under test.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "peclab/gates.hpp"
#include "peclab/pauli.hpp"

namespace oracle {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

inline CMat pauli_matrix_1q(int axis) {
  CMat m(2, 2);
  const cplx i(0.0, 1.0);
  switch (axis) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad axis");
  }
  return m;
}

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMat pauli_matrix(int index, int n) {
  CMat m = pauli_matrix_1q((index >> (2 * (n - 1))) & 3);
  for (int q = 1; q < n; ++q) m = kron(m, pauli_matrix_1q((index >> (2 * (n - 1 - q))) & 3));
  return m;
}

// exp(-i angle/2 P) for an n-qubit Pauli P (uses P^2 = I).
inline CMat pauli_rotation_unitary(int generator_index, int n, double angle) {
  const int d = 1 << n;
  const cplx i(0.0, 1.0);
  return std::cos(angle / 2) * CMat::Identity(d, d) -
         i * std::sin(angle / 2) * pauli_matrix(generator_index, n);
}

inline CMat unitary_for_gate(const peclab::GateLabel& g) {
  using namespace peclab;
  if (auto rot = parse_rotation(g.name)) {
    if (rot->axis == AXIS_I) return CMat::Identity(2, 2);
    return pauli_rotation_unitary(rot->axis, 1, rot->angle_rad);
  }
  if (g.name == "MS_YY") return pauli_rotation_unitary(4 * AXIS_Y + AXIS_Y, 2, M_PI / 2);
  // Deliberately NOT the sandwich construction, so it cross-checks it.
  if (g.name == "MS_ZZ") return pauli_rotation_unitary(4 * AXIS_Z + AXIS_Z, 2, M_PI / 2);
  if (is_pair_gate(g)) {
    auto [a, b] = split_pair(g);
    return kron(unitary_for_gate(a), unitary_for_gate(b));
  }
  throw std::invalid_argument("oracle: unknown gate " + g.name);
}

// PTM entries R_jk = Tr(P_j U P_k U^dag) / 2^n.
inline Eigen::MatrixXd ptm_of_unitary(const CMat& u, int n) {
  const int d = peclab::pauli_dim(n);
  const int dim = 1 << n;
  Eigen::MatrixXd r(d, d);
  for (int j = 0; j < d; ++j) {
    CMat pj = pauli_matrix(j, n);
    for (int k = 0; k < d; ++k) {
      CMat pk = pauli_matrix(k, n);
      r(j, k) = ((pj * u * pk * u.adjoint()).trace() / double(dim)).real();
    }
  }
  return r;
}

inline Eigen::MatrixXd ptm_of_pauli_channel(const Eigen::VectorXd& rates, int n) {
  const int d = peclab::pauli_dim(n);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j) r += rates[j] * ptm_of_unitary(pauli_matrix(j, n), n);
  return r;
}

inline Eigen::VectorXd pauli_vector_of_density(const CMat& rho, int n) {
  const int d = peclab::pauli_dim(n);
  Eigen::VectorXd v(d);
  for (int j = 0; j < d; ++j)
    v[j] = ((pauli_matrix(j, n) * rho).trace()).real() / std::sqrt(double(1 << n));
  return v;
}

// Density-matrix evolution of one circuit on a device with Pauli gate noise:
// rho -> U rho U^dag followed by sum_j p_j P_j rho P_j per gate; returns the
// probability of the all-zeros outcome.
inline double circuit_probability(const CMat& rho0, const std::vector<CMat>& unitaries,
                                  const std::vector<Eigen::VectorXd>& noise_rates, int n) {
  CMat rho = rho0;
  for (size_t s = 0; s < unitaries.size(); ++s) {
    rho = unitaries[s] * rho * unitaries[s].adjoint();
    const Eigen::VectorXd& p = noise_rates[s];
    CMat mixed = CMat::Zero(rho.rows(), rho.cols());
    for (int j = 0; j < p.size(); ++j) {
      CMat pj = pauli_matrix(j, n);
      mixed += p[j] * pj * rho * pj;
    }
    rho = mixed;
  }
  return rho(0, 0).real();
}

}  // namespace oracle
