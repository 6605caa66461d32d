#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peclab/ptm.hpp"

namespace peclab {

// A gate label names one operation of the device:
//   single-qubit rotations  "I", "X90", "X-90", "X180", "X-180", "Y90", ...
//                           (number = rotation angle in degrees, convention
//                            R_A(theta) = exp(-i * theta * A / 2))
//   two-qubit entanglers    "MS_YY" = exp(-i pi/4 Y(x)Y), "MS_ZZ" derived by
//                           conjugating MS_YY with X90 / X-90 on both qubits
//   simultaneous pairs      "g0:g1", one single-qubit gate per qubit slot
struct GateLabel {
  std::string name;

  GateLabel() = default;
  GateLabel(std::string s) : name(std::move(s)) {}
  GateLabel(const char* s) : name(s) {}

  bool operator==(const GateLabel& o) const { return name == o.name; }
  bool operator<(const GateLabel& o) const { return name < o.name; }
};

struct Rotation {
  int axis;             // AXIS_X, AXIS_Y or AXIS_Z; AXIS_I for the identity gate
  double angle_rad;     // 0 for the identity gate
};

// "-" marks an empty fiducial slot: no pulse at all, as opposed to the
// characterized identity gate "I" which is a timed wait. Pair labels may
// carry it on one slot ("-:X180").
bool is_noop(const GateLabel& g);

// Parses a single-qubit rotation name; returns nullopt for anything else.
std::optional<Rotation> parse_rotation(const std::string& name);

bool is_single_qubit_gate(const GateLabel& g);
bool is_pair_gate(const GateLabel& g);
bool is_ms_gate(const GateLabel& g);
int gate_qubits(const GateLabel& g);
std::pair<GateLabel, GateLabel> split_pair(const GateLabel& g);
GateLabel make_pair(const GateLabel& a, const GateLabel& b);

// The 11-element single-qubit gate set, in canonical order:
// I, X180, X-180, Y180, Y-180, Z180, Z-180, X90, X-90, Y90, Y-90.
const std::vector<GateLabel>& gate_set_1q();

// Preparation fiducials {-, X180, Y-90, X90}: applied to |0> they prepare
// |0>, |1>, |1>_X, |1>_Y. The first entry is the empty fiducial (no pulse).
const std::vector<GateLabel>& fiducials_1q();

// Measurement fiducials: the non-identity fiducials {X180, Y-90, X90},
// measuring -Z, X and Y respectively when followed by the |0> projector.
const std::vector<GateLabel>& meas_fiducials_1q();

// The Pauli gates used as quasi-probability basis operations: I, X180, Y180, Z180.
const std::vector<GateLabel>& pauli_ops_1q();

// PTM of exp(-i * angle/2 * P), with P the n-qubit Pauli at `generator_index`.
Ptm rotation_ptm(int n, int generator_index, double angle_rad);

// Exact PTM of the noiseless gate. Orthogonal; first row (1, 0, ..., 0).
Ptm ideal_ptm(const GateLabel& g);

}  // namespace peclab
