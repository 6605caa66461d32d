#pragma once

#include <Eigen/Dense>

#include "peclab/ptm.hpp"

namespace peclab {

// Pauli error rates p_j on the probability simplex: rho -> sum_j p_j P_j rho P_j.
struct PauliChannel {
  int n = 1;
  Eigen::VectorXd rates;

  PauliChannel() = default;
  PauliChannel(int n_, Eigen::VectorXd rates_) : n(n_), rates(std::move(rates_)) {
    if (rates.size() != pauli_dim(n))
      throw std::invalid_argument("PauliChannel: rate count does not match qubit count");
  }

  static PauliChannel identity(int n) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(pauli_dim(n));
    r[0] = 1.0;
    return PauliChannel(n, r);
  }

  bool is_identity(double tol = 0.0) const { return std::abs(rates[0] - 1.0) <= tol; }

  void validate(double tol = 1e-12) const {
    double sum = 0.0;
    for (int j = 0; j < rates.size(); ++j) {
      if (rates[j] < -tol)
        throw std::invalid_argument("PauliChannel: negative rate");
      sum += rates[j];
    }
    if (std::abs(sum - 1.0) > tol)
      throw std::invalid_argument("PauliChannel: rates do not sum to 1");
  }
};

// Diagonal PTM of the Pauli channel: entry k is sum_j p_j * sign(P_j, P_k),
// +1 when the Paulis commute and -1 otherwise.
inline Ptm channel_ptm(const PauliChannel& ch) {
  ch.validate();
  const int d = pauli_dim(ch.n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    double acc = 0.0;
    for (int j = 0; j < d; ++j) acc += ch.rates[j] * commute_sign(j, k, ch.n);
    m(k, k) = acc;
  }
  return Ptm(ch.n, m);
}

// Diagonal of channel_ptm without building the matrix.
inline Eigen::VectorXd channel_diagonal(const PauliChannel& ch) {
  const int d = pauli_dim(ch.n);
  Eigen::VectorXd diag(d);
  for (int k = 0; k < d; ++k) {
    double acc = 0.0;
    for (int j = 0; j < d; ++j) acc += ch.rates[j] * commute_sign(j, k, ch.n);
    diag[k] = acc;
  }
  return diag;
}

// Inverse of channel_diagonal: rates from a diagonal (Walsh transform, scaled).
inline Eigen::VectorXd rates_from_diagonal(const Eigen::VectorXd& diag, int n) {
  const int d = pauli_dim(n);
  Eigen::VectorXd rates(d);
  for (int j = 0; j < d; ++j) {
    double acc = 0.0;
    for (int k = 0; k < d; ++k) acc += commute_sign(j, k, n) * diag[k];
    rates[j] = acc / d;
  }
  return rates;
}

}  // namespace peclab
