#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "peclab/channel.hpp"
#include "peclab/gates.hpp"
#include "peclab/ptm.hpp"
#include "peclab/rng.hpp"

namespace peclab {

// Optional linear ramp of one Pauli rate of every gate channel across a run,
// compensated on the identity rate. t is the normalized run fraction in [0,1].
struct DriftSpec {
  bool enabled = false;
  int pauli_axis = AXIS_Z;
  double delta = 0.0;
};

// Ground-truth configuration of the simulated device. Immutable once built;
// all execution entry points are pure functions of (spec, setting, stream).
struct DeviceSpec {
  int n = 1;
  // Keys: single-qubit gate names for n=1; "<gate>@<qubit>" plus "MS_YY" for n=2.
  std::map<std::string, PauliChannel> gate_noise;
  std::vector<Eigen::Vector3d> prep_bloch;         // one per qubit
  std::vector<Eigen::RowVector4d> povm0_1q;        // per-qubit E_0, normalized Pauli basis
  Eigen::MatrixXd readout_confusion;               // 2^n x 2^n, columns sum to 1
  std::vector<Eigen::MatrixXd> confusion_factors;  // per-qubit 2x2 when factorized
  double crosstalk_ratio = 0.0;
  uint64_t seed = 0;
  DriftSpec drift;

  static DeviceSpec noiseless(int n);

  // True prepared state / all-zeros POVM element as full n-qubit vectors.
  PauliVector prep_state() const;
  ObservableVector povm_element() const;

  const PauliChannel& noise_for(const std::string& key) const;
  void validate() const;
};

// One executable circuit: the gate sequence is applied in order to the bare
// prepared state and followed by the computational-basis measurement.
// init_index / meas_fiducial are dataset bookkeeping keys, not extra gates.
struct ExperimentalSetting {
  int init_index = 0;
  std::vector<GateLabel> gate_sequence;
  int meas_fiducial = 0;
  long shots = 1;
};

struct ShotRecord {
  ExperimentalSetting setting;
  long zeros_count = 0;
  long shots = 0;
};

// Per-pattern counts over the 2^n measurement outcomes, all-zeros first.
struct OutcomeCounts {
  std::vector<long> counts;
  long shots = 0;
  long zeros() const { return counts.empty() ? 0 : counts[0]; }
  // Empirical <Z> (n=1) or <Z(x)Z> (n=2) estimate.
  double z_parity_mean() const;
};

// True noisy PTM of one operation: ideal gate followed by its Pauli channel,
// with the coherent crosstalk leak folded in for single-qubit gates at n=2.
Ptm noisy_op_ptm(const DeviceSpec& dev, const GateLabel& g, double drift_t = 0.0);

// Caches the noisy op PTMs and the readout map of one device so that long
// circuit ensembles (RB, PEC sampling) avoid rebuilding matrices per call.
class CircuitEvaluator {
 public:
  explicit CircuitEvaluator(const DeviceSpec& dev, double drift_t = 0.0);

  // Exact outcome distribution over the 2^n patterns, confusion applied.
  Eigen::VectorXd distribution(const std::vector<GateLabel>& seq) const;
  OutcomeCounts sample(const std::vector<GateLabel>& seq, long shots, RngStream& rng) const;
  // Exact <Z> (n=1) / <Z(x)Z> (n=2) of the measured distribution.
  double z_expectation(const std::vector<GateLabel>& seq) const;

  const Eigen::MatrixXd& op(const GateLabel& g) const;
  OutcomeCounts sample_distribution(const Eigen::VectorXd& probs, long shots,
                                    RngStream& rng) const;
  const Eigen::VectorXd& prep() const { return rho0_; }
  const Eigen::MatrixXd& povm_rows() const { return povm_rows_; }
  int qubits() const { return n_; }

 private:
  const DeviceSpec& dev_;
  double drift_t_;
  int n_;
  Eigen::VectorXd rho0_;
  Eigen::MatrixXd povm_rows_;  // 2^n x 4^n, readout confusion folded in
  mutable std::map<std::string, Eigen::MatrixXd> cache_;
};

// PTM of a single-qubit rotation applied to `target` on a two-qubit device:
// the rotation on the target together with the same-axis rotation scaled by
// crosstalk_ratio on the neighbor, followed by the gate's Pauli channel on
// the target slot. MS gates are rejected (driven by global beams).
Ptm crosstalk_gate_ptm(const DeviceSpec& dev, const GateLabel& g, int target,
                       double drift_t = 0.0);

// Exact outcome distribution over the 2^n patterns, readout confusion applied.
Eigen::VectorXd outcome_distribution(const DeviceSpec& dev, const ExperimentalSetting& s,
                                     double drift_t = 0.0);

// Shot-free probability of the all-zeros outcome.
double exact_setting_probability(const DeviceSpec& dev, const ExperimentalSetting& s,
                                 double drift_t = 0.0);

OutcomeCounts sample_setting(const DeviceSpec& dev, const ExperimentalSetting& s,
                             RngStream& rng, double drift_t = 0.0);

ShotRecord run_setting(const DeviceSpec& dev, const ExperimentalSetting& s, RngStream& rng,
                       double drift_t = 0.0);

// Restriction of a two-qubit device to one qubit, for per-qubit GST.
DeviceSpec single_qubit_view(const DeviceSpec& dev, int qubit);

struct SweepPoint {
  double ratio;
  double fidelity_ms_yy;
  double fidelity_ms_zz;
};

// Final-state fidelity of MS_YY and MS_ZZ on |00> versus the ideal output, as
// a function of the crosstalk ratio. Pauli channels are held at identity so
// the curves isolate the crosstalk mechanism; the MS_YY column is constant
// and the MS_ZZ column non-increasing.
std::vector<SweepPoint> state_fidelity_sweep(const std::vector<double>& ratios);

// Smallest ratio whose crosstalk-induced MS_ZZ error matches `target_error`.
double calibrate_crosstalk_ratio(double target_error);

}  // namespace peclab
