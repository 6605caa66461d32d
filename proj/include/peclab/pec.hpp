#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peclab/device.hpp"
#include "peclab/gst.hpp"
#include "peclab/qpd.hpp"

namespace peclab {

// Quasi-probability decompositions for one target sequence: the initial
// state over the 4^n fiducial-prepared states, and each of the 2L+1 target
// operations over the 4^n experimental Pauli operations.
struct SequenceDecomps {
  int n = 1;
  QuasiDecomposition state;
  std::vector<QuasiDecomposition> gates;  // one per target operation
  double total_C = 1.0;
};

// One Monte-Carlo draw: initial-state index, per-slot compensation Pauli
// indices, and the sign of the sampled coefficient product.
struct SampledCircuit {
  int init_index = 0;
  std::vector<int> compensation;
  int sign = 1;
};

struct MitigatedEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long n_circuits = 0;
  int shots_per_circuit = 0;
  double total_C = 1.0;
};

// Decompositions for a sequence against a characterization: inverse noise of
// every target op expanded over the experimental Pauli basis, and the ideal
// initial state over the experimental basis states.
SequenceDecomps decompose_sequence(const GstEstimate& est,
                                   const std::vector<GateLabel>& sequence);

// Draws (i, b) with probability |q_{0,i} prod_l q_{l,b_l}| / C.
SampledCircuit sample_circuit(const SequenceDecomps& decomps, RngStream& rng);

// The executable setting for a sampled circuit: fiducial preparation, then
// each target gate followed by its compensation Pauli operation.
ExperimentalSetting circuit_setting(const std::vector<GateLabel>& sequence,
                                    const SampledCircuit& circuit, long shots);

// Signed Monte-Carlo estimator of the Z (or Z(x)Z) expectation of the ideal
// sequence: value = C * mean(sign * per-circuit estimate), with the standard
// error of that mean. When `audit` is given, one line per sampled circuit
// (i, a, b, sign, zeros, shots) is appended for reproducibility.
MitigatedEstimate estimate_mitigated(const DeviceSpec& dev,
                                     const std::vector<GateLabel>& sequence,
                                     const SequenceDecomps& decomps, long n_circuits, int shots,
                                     RngStream& rng, std::string* audit = nullptr);

// Exhaustive q-weighted enumeration of all (4^n)^(2L+2) settings using exact
// probabilities; equals the ideal expectation when the characterization
// matches the true device. Enumeration is capped at 1e7 settings.
double exact_mitigated(const DeviceSpec& dev, const std::vector<GateLabel>& sequence,
                       const SequenceDecomps& decomps);

// Exact expectation of the noiseless sequence on the ideal initial state.
double ideal_sequence_expectation(const std::vector<GateLabel>& sequence, int n);

}  // namespace peclab
