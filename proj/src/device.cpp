#include "peclab/device.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace peclab {

namespace {

Eigen::RowVector4d ideal_e0_1q() {
  const double s = 1.0 / std::sqrt(2.0);
  return Eigen::RowVector4d(s, 0.0, 0.0, s);
}

// Complement I - E of a single-qubit POVM element in the normalized basis.
Eigen::RowVector4d complement_e(const Eigen::RowVector4d& e) {
  Eigen::RowVector4d out = -e;
  out[0] += std::sqrt(2.0);
  return out;
}

PauliChannel drifted(const PauliChannel& ch, const DriftSpec& drift, double t) {
  if (!drift.enabled || t == 0.0 || drift.delta == 0.0) return ch;
  PauliChannel out = ch;
  double shift = drift.delta * t;
  shift = std::min(shift, out.rates[0]);  // keep the simplex
  out.rates[drift.pauli_axis] += shift;
  out.rates[0] -= shift;
  return out;
}

}  // namespace

DeviceSpec DeviceSpec::noiseless(int n) {
  DeviceSpec dev;
  dev.n = n;
  if (n == 1) {
    for (const GateLabel& g : gate_set_1q()) dev.gate_noise[g.name] = PauliChannel::identity(1);
  } else {
    for (int q = 0; q < 2; ++q)
      for (const GateLabel& g : gate_set_1q())
        dev.gate_noise[g.name + "@" + std::to_string(q)] = PauliChannel::identity(1);
    dev.gate_noise["MS_YY"] = PauliChannel::identity(2);
  }
  dev.prep_bloch.assign(n, Eigen::Vector3d(0.0, 0.0, 1.0));
  dev.povm0_1q.assign(n, ideal_e0_1q());
  const int outcomes = 1 << n;
  dev.readout_confusion = Eigen::MatrixXd::Identity(outcomes, outcomes);
  dev.confusion_factors.assign(n, Eigen::MatrixXd::Identity(2, 2));
  return dev;
}

PauliVector DeviceSpec::prep_state() const {
  if (n == 1) return state_from_bloch(prep_bloch[0]);
  return tensor(state_from_bloch(prep_bloch[0]), state_from_bloch(prep_bloch[1]));
}

ObservableVector DeviceSpec::povm_element() const {
  if (n == 1) return ObservableVector(1, povm0_1q[0]);
  Eigen::RowVectorXd v(16);
  for (int i = 0; i < 4; ++i) v.segment<4>(4 * i) = povm0_1q[0][i] * povm0_1q[1];
  return ObservableVector(2, v);
}

const PauliChannel& DeviceSpec::noise_for(const std::string& key) const {
  auto it = gate_noise.find(key);
  if (it == gate_noise.end())
    throw std::invalid_argument("device: gate '" + key + "' not configured");
  return it->second;
}

void DeviceSpec::validate() const {
  if (n < 1 || n > 2) throw std::invalid_argument("device: n must be 1 or 2");
  for (const auto& [key, ch] : gate_noise) ch.validate();
  if (static_cast<int>(prep_bloch.size()) != n || static_cast<int>(povm0_1q.size()) != n)
    throw std::invalid_argument("device: SPAM fields must have one entry per qubit");
  const int outcomes = 1 << n;
  if (readout_confusion.rows() != outcomes || readout_confusion.cols() != outcomes)
    throw std::invalid_argument("device: confusion matrix has wrong shape");
  for (int c = 0; c < outcomes; ++c) {
    double sum = readout_confusion.col(c).sum();
    if (std::abs(sum - 1.0) > 1e-9 || readout_confusion.col(c).minCoeff() < -1e-12)
      throw std::invalid_argument("device: confusion columns must be stochastic");
  }
  if (crosstalk_ratio < 0.0) throw std::invalid_argument("device: negative crosstalk ratio");
}

Ptm crosstalk_gate_ptm(const DeviceSpec& dev, const GateLabel& g, int target, double drift_t) {
  if (dev.n != 2) throw std::invalid_argument("crosstalk_gate_ptm: two-qubit device required");
  if (target < 0 || target > 1) throw std::invalid_argument("crosstalk_gate_ptm: bad target");
  auto rot = parse_rotation(g.name);
  if (!rot)
    throw std::invalid_argument("crosstalk_gate_ptm: '" + g.name +
                                "' is not a single-qubit rotation");
  Ptm own = rot->axis == AXIS_I ? Ptm::identity(1) : rotation_ptm(1, rot->axis, rot->angle_rad);
  double leak_angle = rot->angle_rad * dev.crosstalk_ratio;
  Ptm leak = (rot->axis == AXIS_I || leak_angle == 0.0)
                 ? Ptm::identity(1)
                 : rotation_ptm(1, rot->axis, leak_angle);
  Ptm unitary = target == 0 ? tensor(own, leak) : tensor(leak, own);
  PauliChannel ch =
      drifted(dev.noise_for(g.name + "@" + std::to_string(target)), dev.drift, drift_t);
  Ptm noise1 = channel_ptm(ch);
  Ptm noise2 = target == 0 ? tensor(noise1, Ptm::identity(1)) : tensor(Ptm::identity(1), noise1);
  return compose(noise2, unitary);
}

Ptm noisy_op_ptm(const DeviceSpec& dev, const GateLabel& g, double drift_t) {
  if (dev.n == 1) {
    if (is_noop(g)) return Ptm::identity(1);
    if (!is_single_qubit_gate(g))
      throw std::invalid_argument("device: '" + g.name + "' needs two qubits");
    PauliChannel ch = drifted(dev.noise_for(g.name), dev.drift, drift_t);
    return compose(channel_ptm(ch), ideal_ptm(g));
  }
  if (g.name == "MS_YY") {
    PauliChannel ch = drifted(dev.noise_for("MS_YY"), dev.drift, drift_t);
    return compose(channel_ptm(ch), ideal_ptm(g));
  }
  if (g.name == "MS_ZZ") {
    // Implemented as MS_YY conjugated by real X90 / X-90 pulse pairs; the
    // sandwich pulses carry their own noise and crosstalk.
    Ptm pre = noisy_op_ptm(dev, GateLabel("X90:X90"), drift_t);
    Ptm mid = noisy_op_ptm(dev, GateLabel("MS_YY"), drift_t);
    Ptm post = noisy_op_ptm(dev, GateLabel("X-90:X-90"), drift_t);
    return compose(post, compose(mid, pre));
  }
  if (is_pair_gate(g)) {
    auto [a, b] = split_pair(g);
    Ptm out = Ptm::identity(2);
    if (!is_noop(a)) out = crosstalk_gate_ptm(dev, a, 0, drift_t);
    if (!is_noop(b)) out = compose(crosstalk_gate_ptm(dev, b, 1, drift_t), out);
    return out;
  }
  if (is_single_qubit_gate(g))
    throw std::invalid_argument("device: bare single-qubit gate '" + g.name +
                                "' on a two-qubit device; use a pair label");
  throw std::invalid_argument("device: unknown gate '" + g.name + "'");
}

double OutcomeCounts::z_parity_mean() const {
  if (shots == 0) return 0.0;
  double acc = 0.0;
  const int n_outcomes = static_cast<int>(counts.size());
  for (int pattern = 0; pattern < n_outcomes; ++pattern) {
    int ones = __builtin_popcount(static_cast<unsigned>(pattern));
    acc += (ones % 2 == 0 ? 1.0 : -1.0) * double(counts[pattern]);
  }
  return acc / double(shots);
}

CircuitEvaluator::CircuitEvaluator(const DeviceSpec& dev, double drift_t)
    : dev_(dev), drift_t_(drift_t), n_(dev.n), rho0_(dev.prep_state().v) {
  const int outcomes = 1 << n_;
  Eigen::MatrixXd raw_rows(outcomes, pauli_dim(n_));
  if (n_ == 1) {
    raw_rows.row(0) = dev.povm0_1q[0];
    raw_rows.row(1) = complement_e(dev.povm0_1q[0]);
  } else {
    for (int pattern = 0; pattern < 4; ++pattern) {
      Eigen::RowVector4d e0 = (pattern & 2) ? complement_e(dev.povm0_1q[0]) : dev.povm0_1q[0];
      Eigen::RowVector4d e1 = (pattern & 1) ? complement_e(dev.povm0_1q[1]) : dev.povm0_1q[1];
      for (int i = 0; i < 4; ++i) raw_rows.row(pattern).segment<4>(4 * i) = e0[i] * e1;
    }
  }
  povm_rows_ = raw_rows;
}

const Eigen::MatrixXd& CircuitEvaluator::op(const GateLabel& g) const {
  auto it = cache_.find(g.name);
  if (it == cache_.end())
    it = cache_.emplace(g.name, noisy_op_ptm(dev_, g, drift_t_).m).first;
  return it->second;
}

Eigen::VectorXd CircuitEvaluator::distribution(const std::vector<GateLabel>& seq) const {
  Eigen::VectorXd v = rho0_;
  for (const GateLabel& g : seq) v = op(g) * v;
  const int outcomes = 1 << n_;
  Eigen::VectorXd probs = povm_rows_ * v;
  for (int i = 0; i < outcomes; ++i) {
    if (probs[i] < -1e-9 || probs[i] > 1.0 + 1e-9)
      throw std::runtime_error("device: outcome probability outside [0,1]: " +
                               std::to_string(probs[i]));
  }
  probs = dev_.readout_confusion * probs;
  for (int i = 0; i < outcomes; ++i) probs[i] = std::clamp(probs[i], 0.0, 1.0);
  return probs;
}

OutcomeCounts CircuitEvaluator::sample_distribution(const Eigen::VectorXd& probs, long shots,
                                                    RngStream& rng) const {
  if (shots < 1) throw std::invalid_argument("device: shots must be >= 1");
  const int outcomes = static_cast<int>(probs.size());
  OutcomeCounts out;
  out.counts.assign(outcomes, 0);
  out.shots = shots;
  for (long shot = 0; shot < shots; ++shot) {
    double u = rng.uniform();
    int pattern = outcomes - 1;
    double acc = 0.0;
    for (int i = 0; i < outcomes; ++i) {
      acc += probs[i];
      if (u < acc) {
        pattern = i;
        break;
      }
    }
    ++out.counts[pattern];
  }
  return out;
}

OutcomeCounts CircuitEvaluator::sample(const std::vector<GateLabel>& seq, long shots,
                                       RngStream& rng) const {
  return sample_distribution(distribution(seq), shots, rng);
}

double CircuitEvaluator::z_expectation(const std::vector<GateLabel>& seq) const {
  Eigen::VectorXd probs = distribution(seq);
  double acc = 0.0;
  for (int pattern = 0; pattern < probs.size(); ++pattern) {
    int ones = __builtin_popcount(static_cast<unsigned>(pattern));
    acc += (ones % 2 == 0 ? 1.0 : -1.0) * probs[pattern];
  }
  return acc;
}

Eigen::VectorXd outcome_distribution(const DeviceSpec& dev, const ExperimentalSetting& s,
                                     double drift_t) {
  return CircuitEvaluator(dev, drift_t).distribution(s.gate_sequence);
}

double exact_setting_probability(const DeviceSpec& dev, const ExperimentalSetting& s,
                                 double drift_t) {
  return outcome_distribution(dev, s, drift_t)[0];
}

OutcomeCounts sample_setting(const DeviceSpec& dev, const ExperimentalSetting& s, RngStream& rng,
                             double drift_t) {
  CircuitEvaluator eval(dev, drift_t);
  return eval.sample_distribution(eval.distribution(s.gate_sequence), s.shots, rng);
}

ShotRecord run_setting(const DeviceSpec& dev, const ExperimentalSetting& s, RngStream& rng,
                       double drift_t) {
  OutcomeCounts counts = sample_setting(dev, s, rng, drift_t);
  return ShotRecord{s, counts.zeros(), counts.shots};
}

DeviceSpec single_qubit_view(const DeviceSpec& dev, int qubit) {
  if (dev.n != 2) throw std::invalid_argument("single_qubit_view: two-qubit device required");
  if (qubit < 0 || qubit > 1) throw std::invalid_argument("single_qubit_view: bad qubit");
  if (dev.confusion_factors.size() != 2)
    throw std::invalid_argument("single_qubit_view: requires per-qubit readout confusion");
  DeviceSpec view;
  view.n = 1;
  const std::string suffix = "@" + std::to_string(qubit);
  for (const GateLabel& g : gate_set_1q()) view.gate_noise[g.name] = dev.noise_for(g.name + suffix);
  view.prep_bloch = {dev.prep_bloch[qubit]};
  view.povm0_1q = {dev.povm0_1q[qubit]};
  view.readout_confusion = dev.confusion_factors[qubit];
  view.confusion_factors = {dev.confusion_factors[qubit]};
  view.crosstalk_ratio = 0.0;
  view.seed = dev.seed;
  view.drift = dev.drift;
  return view;
}

std::vector<SweepPoint> state_fidelity_sweep(const std::vector<double>& ratios) {
  std::vector<SweepPoint> table;
  table.reserve(ratios.size());
  Eigen::VectorXd ideal_yy = ideal_ptm(GateLabel("MS_YY")).m * ket0_state(2).v;
  Eigen::VectorXd ideal_zz = ideal_ptm(GateLabel("MS_ZZ")).m * ket0_state(2).v;
  for (double r : ratios) {
    if (r < 0.0) throw std::invalid_argument("state_fidelity_sweep: negative ratio");
    DeviceSpec dev = DeviceSpec::noiseless(2);
    dev.crosstalk_ratio = r;
    Eigen::VectorXd out_yy =
        noisy_op_ptm(dev, GateLabel("MS_YY")).m * ket0_state(2).v;
    Eigen::VectorXd out_zz =
        noisy_op_ptm(dev, GateLabel("MS_ZZ")).m * ket0_state(2).v;
    table.push_back({r, ideal_yy.dot(out_yy), ideal_zz.dot(out_zz)});
  }
  return table;
}

double calibrate_crosstalk_ratio(double target_error) {
  auto err_at = [](double r) {
    return 1.0 - state_fidelity_sweep({r})[0].fidelity_ms_zz;
  };
  double lo = 0.0, hi = 0.5;
  if (err_at(hi) < target_error)
    throw std::invalid_argument("calibrate_crosstalk_ratio: target beyond sweep range");
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    (err_at(mid) < target_error ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace peclab
