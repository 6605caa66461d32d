#include "peclab/qpd.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace peclab {

Ptm inverse_noise(const Ptm& experimental, const Ptm& ideal, double max_condition) {
  check_same_n(experimental.n, ideal.n, "inverse_noise");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(experimental.m);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > max_condition)
    throw std::invalid_argument(
        "inverse_noise: experimental PTM ill-conditioned (condition number " +
        std::to_string(smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity()) +
        ")");
  Eigen::MatrixXd inv =
      experimental.m.partialPivLu().solve(Eigen::MatrixXd::Identity(experimental.m.rows(),
                                                                    experimental.m.cols()));
  return Ptm(experimental.n, ideal.m * inv);
}

QuasiDecomposition decompose_inverse(const Ptm& n_inv, const std::vector<Ptm>& basis,
                                     double residual_tol) {
  const int d = pauli_dim(n_inv.n);
  if (static_cast<int>(basis.size()) != d)
    throw std::invalid_argument("decompose_inverse: basis must have 4^n elements");
  Eigen::MatrixXd a(d, d);
  for (int j = 0; j < d; ++j) {
    check_same_n(basis[j].n, n_inv.n, "decompose_inverse");
    a.col(j) = basis[j].m.diagonal();
  }
  Eigen::VectorXd q = a.fullPivLu().solve(n_inv.m.diagonal());

  Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j) recon += q[j] * basis[j].m;
  double residual = (recon - n_inv.m).cwiseAbs().maxCoeff();
  if (residual > residual_tol)
    throw std::invalid_argument("decompose_inverse: basis deficient, reconstruction residual " +
                                std::to_string(residual));
  return QuasiDecomposition{q, q.cwiseAbs().sum()};
}

QuasiDecomposition decompose_initial_state(const PauliVector& ideal_state,
                                           const std::vector<PauliVector>& experimental_states,
                                           double residual_tol) {
  const int d = pauli_dim(ideal_state.n);
  if (static_cast<int>(experimental_states.size()) != d)
    throw std::invalid_argument("decompose_initial_state: need 4^n basis states");
  Eigen::MatrixXd m(d, d);
  for (int j = 0; j < d; ++j) {
    check_same_n(experimental_states[j].n, ideal_state.n, "decompose_initial_state");
    m.col(j) = experimental_states[j].v;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible())
    throw std::invalid_argument("decompose_initial_state: basis states linearly dependent");
  Eigen::VectorXd q = lu.solve(ideal_state.v);
  double residual = (m * q - ideal_state.v).cwiseAbs().maxCoeff();
  if (residual > residual_tol)
    throw std::invalid_argument("decompose_initial_state: reconstruction residual " +
                                std::to_string(residual));
  return QuasiDecomposition{q, q.cwiseAbs().sum()};
}

SequenceCost sequence_cost(const QuasiDecomposition& state_decomp,
                           const std::vector<QuasiDecomposition>& gate_decomps) {
  SequenceCost cost;
  cost.per_element.reserve(gate_decomps.size() + 1);
  cost.per_element.push_back(state_decomp.one_norm);
  cost.total_C = state_decomp.one_norm;
  for (const QuasiDecomposition& g : gate_decomps) {
    cost.per_element.push_back(g.one_norm);
    cost.total_C *= g.one_norm;
  }
  return cost;
}

}  // namespace peclab
