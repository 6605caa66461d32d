#pragma once

#include <Eigen/Dense>
#include <vector>

#include "peclab/ptm.hpp"

namespace peclab {

// Signed coefficients q over a fixed set of basis operations, summing to 1.
// one_norm is the local mitigation cost C = sum |q| >= 1.
struct QuasiDecomposition {
  Eigen::VectorXd q;
  double one_norm = 1.0;
};

// Cost of mitigating a whole sequence: the product of local one-norms.
struct SequenceCost {
  double total_C = 1.0;
  std::vector<double> per_element;
};

// The matrix M with M * experimental = ideal, i.e. the inverse noise
// N^-1 = R_ideal * R_exp^-1. Rejects ill-conditioned experimental PTMs.
Ptm inverse_noise(const Ptm& experimental, const Ptm& ideal,
                  double max_condition = 1e8);

// Solves N_inv = sum_j q_j B_j over the given basis PTMs. Under the Pauli
// ansatz every matrix involved is diagonal, so the solve runs on diagonals;
// the reconstruction residual is checked on the full matrices and a residual
// above `residual_tol` rejects the basis as deficient.
QuasiDecomposition decompose_inverse(const Ptm& n_inv, const std::vector<Ptm>& basis,
                                     double residual_tol = 1e-9);

// Coefficients with sum_i q_i |rho_i>> = |rho_ideal>> for the 4^n
// experimental basis states.
QuasiDecomposition decompose_initial_state(const PauliVector& ideal_state,
                                           const std::vector<PauliVector>& experimental_states,
                                           double residual_tol = 1e-9);

SequenceCost sequence_cost(const QuasiDecomposition& state_decomp,
                           const std::vector<QuasiDecomposition>& gate_decomps);

}  // namespace peclab
