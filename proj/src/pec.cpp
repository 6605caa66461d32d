#include "peclab/pec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace peclab {

namespace {

// Parity (+1/-1 per pattern) folded with the readout rows: z = row . v_final.
Eigen::RowVectorXd parity_row(const DeviceSpec& dev, const CircuitEvaluator& eval) {
  const int outcomes = 1 << dev.n;
  Eigen::RowVectorXd parity(outcomes);
  for (int p = 0; p < outcomes; ++p)
    parity[p] = __builtin_popcount(static_cast<unsigned>(p)) % 2 == 0 ? 1.0 : -1.0;
  return parity * dev.readout_confusion * eval.povm_rows();
}

int draw_index(const QuasiDecomposition& dc, RngStream& rng) {
  double u = rng.uniform() * dc.one_norm;
  double acc = 0.0;
  const int d = static_cast<int>(dc.q.size());
  for (int j = 0; j < d; ++j) {
    acc += std::abs(dc.q[j]);
    if (u < acc) return j;
  }
  return d - 1;
}

}  // namespace

SequenceDecomps decompose_sequence(const GstEstimate& est,
                                   const std::vector<GateLabel>& sequence) {
  SequenceDecomps out;
  out.n = est.n;
  out.state = decompose_initial_state(ket0_state(est.n), estimated_basis_states(est));
  std::vector<Ptm> basis = estimated_pauli_basis(est);
  std::map<std::string, QuasiDecomposition> by_label;
  out.gates.reserve(sequence.size());
  for (const GateLabel& g : sequence) {
    auto it = by_label.find(g.name);
    if (it == by_label.end()) {
      Ptm n_inv = inverse_noise(estimated_ptm(est, g), ideal_ptm(g));
      it = by_label.emplace(g.name, decompose_inverse(n_inv, basis)).first;
    }
    out.gates.push_back(it->second);
  }
  out.total_C = sequence_cost(out.state, out.gates).total_C;
  return out;
}

SampledCircuit sample_circuit(const SequenceDecomps& decomps, RngStream& rng) {
  SampledCircuit c;
  c.init_index = draw_index(decomps.state, rng);
  double sign = decomps.state.q[c.init_index] < 0 ? -1.0 : 1.0;
  c.compensation.reserve(decomps.gates.size());
  for (const QuasiDecomposition& g : decomps.gates) {
    int b = draw_index(g, rng);
    c.compensation.push_back(b);
    if (g.q[b] < 0) sign = -sign;
  }
  c.sign = sign < 0 ? -1 : 1;
  return c;
}

ExperimentalSetting circuit_setting(const std::vector<GateLabel>& sequence,
                                    const SampledCircuit& circuit, long shots) {
  if (circuit.compensation.size() != sequence.size())
    throw std::invalid_argument("circuit_setting: compensation length mismatch");
  int n = sequence.empty() ? 1 : gate_qubits(sequence.front());
  ExperimentalSetting s;
  s.init_index = circuit.init_index;
  s.shots = shots;
  if (auto prep = prep_fiducial_op(n, circuit.init_index)) s.gate_sequence.push_back(*prep);
  for (size_t l = 0; l < sequence.size(); ++l) {
    s.gate_sequence.push_back(sequence[l]);
    s.gate_sequence.push_back(pauli_op_label(n, circuit.compensation[l]));
  }
  return s;
}

MitigatedEstimate estimate_mitigated(const DeviceSpec& dev,
                                     const std::vector<GateLabel>& sequence,
                                     const SequenceDecomps& decomps, long n_circuits, int shots,
                                     RngStream& rng, std::string* audit) {
  if (n_circuits < 2)
    throw std::invalid_argument("estimate_mitigated: need at least 2 circuits for a variance");
  if (decomps.gates.size() != sequence.size())
    throw std::invalid_argument("estimate_mitigated: decomposition/sequence length mismatch");
  const int d = pauli_dim(dev.n);

  CircuitEvaluator eval(dev);
  // fixed per-slot target ops and the 4^n compensation ops, resolved once
  std::vector<const Eigen::MatrixXd*> target_ops;
  for (const GateLabel& g : sequence) target_ops.push_back(&eval.op(g));
  std::vector<const Eigen::MatrixXd*> comp_ops;
  for (int b = 0; b < d; ++b) comp_ops.push_back(&eval.op(pauli_op_label(dev.n, b)));
  std::vector<Eigen::VectorXd> prepped_states;
  for (int i = 0; i < d; ++i) {
    auto prep = prep_fiducial_op(dev.n, i);
    prepped_states.push_back(prep ? Eigen::VectorXd(eval.op(*prep) * eval.prep())
                                  : eval.prep());
  }

  double mean = 0.0, m2 = 0.0;
  long count = 0;
  std::ostringstream audit_lines;
  for (long c = 0; c < n_circuits; ++c) {
    SampledCircuit circ = sample_circuit(decomps, rng);
    Eigen::VectorXd v = prepped_states[circ.init_index];
    for (size_t l = 0; l < sequence.size(); ++l) {
      v = (*target_ops[l]) * v;
      v = (*comp_ops[circ.compensation[l]]) * v;
    }
    Eigen::VectorXd probs = dev.readout_confusion * (eval.povm_rows() * v);
    for (int i = 0; i < probs.size(); ++i) probs[i] = std::clamp(probs[i], 0.0, 1.0);
    OutcomeCounts counts = eval.sample_distribution(probs, shots, rng);
    double x = circ.sign * counts.z_parity_mean();
    ++count;
    double delta = x - mean;
    mean += delta / double(count);
    m2 += delta * (x - mean);
    if (audit) {
      audit_lines << circ.init_index << ' ';
      for (size_t l = 0; l < sequence.size(); ++l)
        audit_lines << sequence[l].name << (l + 1 < sequence.size() ? "," : "");
      audit_lines << ' ';
      for (size_t l = 0; l < circ.compensation.size(); ++l)
        audit_lines << circ.compensation[l] << (l + 1 < circ.compensation.size() ? "," : "");
      audit_lines << ' ' << circ.sign << ' ' << counts.zeros() << ' ' << shots << '\n';
    }
  }

  MitigatedEstimate est;
  est.n_circuits = n_circuits;
  est.shots_per_circuit = shots;
  est.total_C = decomps.total_C;
  est.value = decomps.total_C * mean;
  double variance = m2 / double(n_circuits - 1);
  est.std_error = decomps.total_C * std::sqrt(variance / double(n_circuits));
  if (audit) *audit += audit_lines.str();
  return est;
}

double exact_mitigated(const DeviceSpec& dev, const std::vector<GateLabel>& sequence,
                       const SequenceDecomps& decomps) {
  const int d = pauli_dim(dev.n);
  const size_t slots = sequence.size();
  double n_settings = std::pow(double(d), double(slots + 1));
  if (n_settings > 1e7)
    throw std::invalid_argument("exact_mitigated: enumeration of " +
                                std::to_string(n_settings) + " settings exceeds the 1e7 cap");

  CircuitEvaluator eval(dev);
  Eigen::RowVectorXd z_row = parity_row(dev, eval);
  std::vector<const Eigen::MatrixXd*> target_ops;
  for (const GateLabel& g : sequence) target_ops.push_back(&eval.op(g));
  std::vector<const Eigen::MatrixXd*> comp_ops;
  for (int b = 0; b < d; ++b) comp_ops.push_back(&eval.op(pauli_op_label(dev.n, b)));

  // depth-first enumeration reusing state prefixes
  double total = 0.0;
  std::vector<Eigen::VectorXd> stack(slots + 1);
  std::function<void(size_t, double, const Eigen::VectorXd&)> walk =
      [&](size_t slot, double weight, const Eigen::VectorXd& v) {
        if (slot == slots) {
          total += weight * (z_row * v)(0);
          return;
        }
        Eigen::VectorXd after_target = (*target_ops[slot]) * v;
        for (int b = 0; b < d; ++b) {
          double w = weight * decomps.gates[slot].q[b];
          if (w == 0.0) continue;
          walk(slot + 1, w, (*comp_ops[b]) * after_target);
        }
      };

  for (int i = 0; i < d; ++i) {
    if (decomps.state.q[i] == 0.0) continue;
    auto prep = prep_fiducial_op(dev.n, i);
    Eigen::VectorXd v = prep ? Eigen::VectorXd(eval.op(*prep) * eval.prep()) : eval.prep();
    walk(0, decomps.state.q[i], v);
  }
  return total;
}

double ideal_sequence_expectation(const std::vector<GateLabel>& sequence, int n) {
  Eigen::VectorXd v = ket0_state(n).v;
  for (const GateLabel& g : sequence) v = ideal_ptm(g).m * v;
  return std::sqrt(double(1 << n)) * v[pauli_dim(n) - 1];
}

}  // namespace peclab
