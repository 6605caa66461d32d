#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace peclab {

// Single-qubit Pauli axes in fixed basis order. The same order is used for
// label indices, channel rate vectors and PTM rows/columns throughout.
enum Axis : int { AXIS_I = 0, AXIS_X = 1, AXIS_Y = 2, AXIS_Z = 3 };

inline constexpr int pauli_dim(int n) { return 1 << (2 * n); }

// n-qubit Pauli label over {I,X,Y,Z}; leftmost qubit is most significant in
// the lexicographic index, so for n=2 the order is II, IX, ..., ZY, ZZ.
struct PauliLabel {
  int n = 1;
  int index = 0;

  PauliLabel() = default;
  PauliLabel(int n_, int index_) : n(n_), index(index_) {
    if (n < 1 || n > 2) throw std::invalid_argument("PauliLabel: n must be 1 or 2");
    if (index < 0 || index >= pauli_dim(n))
      throw std::invalid_argument("PauliLabel: index out of range");
  }

  int axis(int qubit) const {  // qubit 0 = leftmost / most significant
    return (index >> (2 * (n - 1 - qubit))) & 3;
  }

  std::string str() const {
    static const char* names = "IXYZ";
    std::string s;
    for (int q = 0; q < n; ++q) s.push_back(names[axis(q)]);
    return s;
  }

  static PauliLabel parse(const std::string& s) {
    int n = static_cast<int>(s.size());
    int idx = 0;
    for (char c : s) {
      int a;
      switch (c) {
        case 'I': a = 0; break;
        case 'X': a = 1; break;
        case 'Y': a = 2; break;
        case 'Z': a = 3; break;
        default: throw std::invalid_argument("PauliLabel: bad axis '" + s + "'");
      }
      idx = idx * 4 + a;
    }
    return PauliLabel(n, idx);
  }
};

// +1 if the single-qubit Paulis a and b commute, -1 otherwise.
inline int axis_commute_sign(int a, int b) {
  return (a == AXIS_I || b == AXIS_I || a == b) ? +1 : -1;
}

// +1 if n-qubit Paulis with indices j and k commute, -1 otherwise.
// Two Pauli strings commute iff they anticommute on an even number of slots.
inline int commute_sign(int j, int k, int n) {
  int sign = 1;
  for (int q = 0; q < n; ++q) {
    int a = (j >> (2 * q)) & 3;
    int b = (k >> (2 * q)) & 3;
    sign *= axis_commute_sign(a, b);
  }
  return sign;
}

// Symbolic product of single-qubit Paulis: P_a P_b = i^phase * P_axis.
struct PauliProduct {
  int axis;
  int phase;  // exponent of i, in {0,1,2,3}
};

inline PauliProduct axis_product(int a, int b) {
  if (a == AXIS_I) return {b, 0};
  if (b == AXIS_I) return {a, 0};
  if (a == b) return {AXIS_I, 0};
  // XY = iZ, YZ = iX, ZX = iY; reversed order picks up i^3.
  int c = 6 - a - b;  // the third non-identity axis
  bool cyclic = (b - a + 3) % 3 == 1;
  return {c, cyclic ? 1 : 3};
}

// Product of n-qubit Paulis by index: P_j P_k = i^phase * P_axis.
inline PauliProduct pauli_product(int j, int k, int n) {
  int axis = 0, phase = 0;
  for (int q = 0; q < n; ++q) {
    int shift = 2 * (n - 1 - q);
    PauliProduct p = axis_product((j >> shift) & 3, (k >> shift) & 3);
    axis |= p.axis << shift;
    phase = (phase + p.phase) & 3;
  }
  return {axis, phase};
}

}  // namespace peclab
