#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "peclab/pauli.hpp"

namespace peclab {

// Real superoperator in the normalized Pauli basis P_j / sqrt(2^n).
// Unitary channels map to orthogonal matrices, Pauli channels to diagonal
// ones, and every trace-preserving map has first row (1, 0, ..., 0).
struct Ptm {
  int n = 1;
  Eigen::MatrixXd m;

  Ptm() = default;
  Ptm(int n_, Eigen::MatrixXd m_) : n(n_), m(std::move(m_)) {
    const int d = pauli_dim(n);
    if (m.rows() != d || m.cols() != d)
      throw std::invalid_argument("Ptm: dimension does not match qubit count");
  }

  static Ptm identity(int n) {
    return Ptm(n, Eigen::MatrixXd::Identity(pauli_dim(n), pauli_dim(n)));
  }
};

// Column vector of normalized Pauli expectations, entry j = Tr(P_j rho)/sqrt(2^n).
struct PauliVector {
  int n = 1;
  Eigen::VectorXd v;

  PauliVector() = default;
  PauliVector(int n_, Eigen::VectorXd v_) : n(n_), v(std::move(v_)) {
    if (v.size() != pauli_dim(n))
      throw std::invalid_argument("PauliVector: dimension does not match qubit count");
  }

  // Pauli expectation Tr(P_j rho) of the represented state.
  double pauli_expectation(int j) const { return v[j] * std::sqrt(double(1 << n)); }
};

// Row vector representing an observable/POVM element, entry j = Tr(P_j E)/sqrt(2^n).
struct ObservableVector {
  int n = 1;
  Eigen::RowVectorXd v;

  ObservableVector() = default;
  ObservableVector(int n_, Eigen::RowVectorXd v_) : n(n_), v(std::move(v_)) {
    if (v.size() != pauli_dim(n))
      throw std::invalid_argument("ObservableVector: dimension does not match qubit count");
  }
};

// Single-qubit state from a Bloch vector (x, y, z).
inline PauliVector state_from_bloch(const Eigen::Vector3d& r) {
  Eigen::VectorXd v(4);
  const double s = 1.0 / std::sqrt(2.0);
  v << s, s * r.x(), s * r.y(), s * r.z();
  return PauliVector(1, v);
}

inline PauliVector ket0_state(int n) {
  if (n == 1) return state_from_bloch({0.0, 0.0, 1.0});
  Eigen::VectorXd v = Eigen::VectorXd::Zero(16);
  // |00><00| = (I+Z)(x)(I+Z)/4: weight 1/2 on II, IZ, ZI, ZZ.
  v[0] = v[3] = v[12] = v[15] = 0.5;
  return PauliVector(2, v);
}

// Projector onto the all-zeros outcome as a POVM element.
inline ObservableVector ket0_projector(int n) {
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(pauli_dim(n));
  if (n == 1) {
    const double s = 1.0 / std::sqrt(2.0);
    v[0] = s;
    v[3] = s;
  } else {
    v[0] = v[3] = v[12] = v[15] = 0.5;
  }
  return ObservableVector(n, v);
}

inline void check_same_n(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": qubit count mismatch");
}

// Matrix product second * first: apply `first` to the state, then `second`.
inline Ptm compose(const Ptm& second, const Ptm& first) {
  check_same_n(second.n, first.n, "compose");
  return Ptm(second.n, second.m * first.m);
}

// Kronecker product in the composite label ordering; `a` acts on the
// leftmost (most significant) qubit.
inline Ptm tensor(const Ptm& a, const Ptm& b) {
  if (a.n != 1 || b.n != 1) throw std::invalid_argument("tensor: single-qubit inputs required");
  Eigen::MatrixXd out(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a.m(i, j) * b.m;
  return Ptm(2, out);
}

inline PauliVector tensor(const PauliVector& a, const PauliVector& b) {
  if (a.n != 1 || b.n != 1)
    throw std::invalid_argument("tensor: single-qubit inputs required");
  Eigen::VectorXd out(16);
  for (int i = 0; i < 4; ++i) out.segment<4>(4 * i) = a.v[i] * b.v;
  return PauliVector(2, out);
}

// <<E| R_k ... R_1 |rho>>, the outcome probability/expectation of the chain.
inline double expectation(const ObservableVector& e, const std::vector<Ptm>& ops,
                          const PauliVector& rho) {
  Eigen::VectorXd v = rho.v;
  for (const Ptm& op : ops) {
    check_same_n(op.n, rho.n, "expectation");
    v = op.m * v;
  }
  check_same_n(e.n, rho.n, "expectation");
  return e.v * v;
}

// Overlap Tr(A B) of two operators given in the normalized Pauli basis; for a
// pure target state this is the state fidelity <psi|rho|psi>.
inline double state_overlap(const PauliVector& a, const PauliVector& b) {
  check_same_n(a.n, b.n, "state_overlap");
  return a.v.dot(b.v);
}

}  // namespace peclab
