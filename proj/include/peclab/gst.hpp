#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peclab/device.hpp"

namespace peclab {

// One tomography record: preparation fiducial i, gate j, measurement
// fiducial k, observed all-zeros frequency over `shots` repetitions. For the
// two-qubit MS step, i indexes the 16 fiducial pairs, k the 9 measurement
// pairs, and j is 0 (the MS_YY gate). Shot-free datasets carry the exact
// probability in freq.
struct GstRecord {
  int i = 0;
  int j = 0;
  int k = 0;
  long shots = 0;
  double freq = 0.0;
};

struct GstDataset {
  int n = 1;
  std::vector<GstRecord> records;
};

// Characterization result under the Pauli-error ansatz. Keys of gate_rates
// follow DeviceSpec::gate_noise ("<gate>" for n=1, "<gate>@<qubit>" and
// "MS_YY" for n=2).
struct GstEstimate {
  int n = 1;
  std::map<std::string, PauliChannel> gate_rates;
  std::vector<Eigen::Vector3d> state_params;  // prepared-state Bloch vector per qubit
  Eigen::MatrixXd gram;
  double log_likelihood = 0.0;
  bool converged = true;
};

// Indices of the preparation fiducials {I, X180, Y-90, X90} and measurement
// fiducials {X180, Y-90, X90} within the canonical single-qubit gate set.
const std::vector<int>& prep_fiducial_gate_index();
const std::vector<int>& meas_fiducial_gate_index();

// The executable circuit for record (i, j, k): sequence [F_i, G_j, F_k].
ExperimentalSetting setting_for(int i, int j, int k, long shots);

// Single-qubit design: all 4 x 11 x 3 = 132 settings, 10000 shots each by
// default. Only n = 1 is supported here; the two-qubit MS-step design needs
// a singles estimate, see design_ms_experiments.
std::vector<ExperimentalSetting> design_experiments(int n, long shots = 10000);

// Runs every design setting on the device; each setting gets its own
// counter-derived substream of (seed, stage).
GstDataset collect_dataset(const DeviceSpec& dev, const std::vector<ExperimentalSetting>& design,
                           uint64_t seed, const std::string& stage);

// Shot-free dataset carrying exact probabilities (weights still use shots).
GstDataset exact_dataset(const DeviceSpec& dev, const std::vector<ExperimentalSetting>& design);

// SPAM Gram matrix from the identity-gate records: entry (p, s) is the
// estimated expectation of Pauli p on prepared state s, with the identity row
// pinned to 1.
Eigen::MatrixXd estimate_gram(const GstDataset& data);

// Weighted log-likelihood log L = -sum (m - mbar)^2 / Delta^2 of candidate
// parameters; Delta^2 = max(mbar(1-mbar)/shots, 1/(4 shots^2)).
double log_likelihood(const GstEstimate& params, const GstDataset& data);

// Maximum-likelihood fit of the 36 single-qubit parameters (3 Pauli rates per
// gate plus the prepared-state Bloch vector), rates kept on the simplex by a
// softmax map. Deterministic given the data.
GstEstimate fit_single_qubit(const GstDataset& data);

// Per-qubit estimates tensored into a two-qubit estimate.
GstEstimate merge_two_qubit(const GstEstimate& q0, const GstEstimate& q1);

// MS-step design: 15 well-conditioned settings picked greedily from the
// 16 x 9 grid, preferring ideal probabilities close to 0 or 1.
std::vector<ExperimentalSetting> design_ms_experiments(const GstEstimate& singles,
                                                       long shots = 3000);

GstDataset collect_ms_dataset(const DeviceSpec& dev, const GstEstimate& singles, long shots,
                              uint64_t seed, const std::string& stage);
GstDataset exact_ms_dataset(const DeviceSpec& dev, const GstEstimate& singles, long shots);

// Solves the linear system connecting the ansatz predictions to the measured
// frequencies for the 15 free MS_YY Pauli rates (the 16th is fixed by trace
// preservation). Tiny negative rates above -1e-4 are projected to zero and
// the vector renormalized; anything below that is a model violation.
PauliChannel characterize_ms(const GstDataset& ms_data, const GstEstimate& singles);

// Experimental MS_ZZ PTM: MS_YY sandwiched by the characterized X90 / X-90
// pulse pairs.
Ptm derive_ms_zz(const GstEstimate& singles, const Ptm& ms_yy);

// PTM of a gate as characterized (noise channel times ideal gate); supports
// single-qubit gates, pairs, MS_YY and MS_ZZ.
Ptm estimated_ptm(const GstEstimate& est, const GateLabel& g);

// Characterized prepared state and fiducial-prepared basis states R_Fi|rho0>.
PauliVector estimated_prep(const GstEstimate& est);
std::vector<PauliVector> estimated_basis_states(const GstEstimate& est);

// Physical preparation op for basis state i; nullopt when i = 0 (no pulse).
std::optional<GateLabel> prep_fiducial_op(int n, int i);

// Experimental Pauli operation label for compensation index b.
GateLabel pauli_op_label(int n, int b);

// Experimental Pauli operations used as the quasi-probability basis:
// {I, X180, Y180, Z180} as characterized (tensor pairs of them for n=2).
std::vector<Ptm> estimated_pauli_basis(const GstEstimate& est);

}  // namespace peclab
