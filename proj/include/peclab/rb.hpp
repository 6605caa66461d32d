#pragma once

#include <string>
#include <vector>

#include "peclab/gst.hpp"
#include "peclab/pec.hpp"

namespace peclab {

// A post-selected random benchmarking sequence: alternating interleaved and
// computational gates (2L+1 operations), whose ideal final state is a Z (or
// Z(x)Z) eigenstate with the recorded outcome.
struct RBSequence {
  int n = 1;
  int length = 0;
  std::vector<GateLabel> ops;
  double ideal_outcome = 1.0;
};

struct RBPoint {
  int length = 0;
  double mean = 0.0;
  double std_err = 0.0;
  int count = 0;
};

// Weighted fit of F(L) = A p^L + B. The exponent counts length units, one
// computational gate plus one interleaved operation each; rate_raw = 1 - p
// and error_rate applies the depolarizing conversion (1-p)/2 for one qubit,
// 3(1-p)/4 for two.
struct DecayFit {
  double amplitude = 0.0, decay = 1.0, baseline = 0.0;
  double amplitude_err = 0.0, decay_err = 0.0, baseline_err = 0.0;
  double rate_raw = 0.0, rate_raw_err = 0.0;
  double error_rate = 0.0, error_rate_err = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // order (A, p, B)
  double chi2 = 0.0;
  int n_points = 0;
};

struct RBResult {
  std::vector<RBPoint> points;
  DecayFit fit;
  std::vector<double> total_C;  // per length, mitigated runs only
};

struct RbOptions {
  std::vector<int> lengths;
  int sequences_per_length = 8;
  long shots = 3000;            // raw measurement shots per sequence
  bool mitigated = false;
  long circuits = 2000;         // sampled circuits per sequence (mitigated)
  int shots_per_circuit = 100;  // shots per sampled circuit (mitigated)
};

// Uniformly draws candidate sequences and keeps the first `count` whose ideal
// final state is a Z (or Z(x)Z) eigenstate. Rejects pathological acceptance
// (more than 1e6 rejected candidates).
std::vector<RBSequence> generate_sequences(int n, int length, int count, RngStream& rng);

// Raw or error-mitigated randomized benchmarking. Mitigated runs require the
// characterization `est` and fill total_C; `audit`, when given, collects one
// line per sampled circuit.
RBResult run_rb(const DeviceSpec& dev, const GstEstimate* est, const RbOptions& opt,
                uint64_t seed, const std::string& stage, std::string* audit = nullptr);

DecayFit fit_decay(const std::vector<RBPoint>& points, int n);

// Pauli-model validation: the same sequences, (a) shot-sampled on the device
// and (b) forward-simulated exactly with the characterized PTMs; both decay
// fits plus the difference of the fitted rates.
struct ValidationReport {
  RBResult sampled;
  RBResult simulated;
  double rate_difference = 0.0;
  double rate_difference_err = 0.0;
};

ValidationReport validate_pauli_assumption(const DeviceSpec& dev, const GstEstimate& est,
                                           const RbOptions& opt, uint64_t seed,
                                           const std::string& stage);

}  // namespace peclab
