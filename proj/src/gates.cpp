#include "peclab/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace peclab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::optional<Rotation> parse_rotation(const std::string& name) {
  if (name == "I") return Rotation{AXIS_I, 0.0};
  if (name.empty()) return std::nullopt;
  int axis;
  switch (name[0]) {
    case 'X': axis = AXIS_X; break;
    case 'Y': axis = AXIS_Y; break;
    case 'Z': axis = AXIS_Z; break;
    default: return std::nullopt;
  }
  const std::string deg = name.substr(1);
  if (deg == "90") return Rotation{axis, kPi / 2};
  if (deg == "-90") return Rotation{axis, -kPi / 2};
  if (deg == "180") return Rotation{axis, kPi};
  if (deg == "-180") return Rotation{axis, -kPi};
  return std::nullopt;
}

bool is_noop(const GateLabel& g) { return g.name == "-"; }

bool is_single_qubit_gate(const GateLabel& g) { return parse_rotation(g.name).has_value(); }

bool is_ms_gate(const GateLabel& g) { return g.name == "MS_YY" || g.name == "MS_ZZ"; }

bool is_pair_gate(const GateLabel& g) { return g.name.find(':') != std::string::npos; }

int gate_qubits(const GateLabel& g) {
  if (is_single_qubit_gate(g) || is_noop(g)) return 1;
  if (is_ms_gate(g) || is_pair_gate(g)) return 2;
  throw std::invalid_argument("unknown gate label '" + g.name + "'");
}

std::pair<GateLabel, GateLabel> split_pair(const GateLabel& g) {
  auto pos = g.name.find(':');
  if (pos == std::string::npos) throw std::invalid_argument("not a pair gate: " + g.name);
  return {GateLabel(g.name.substr(0, pos)), GateLabel(g.name.substr(pos + 1))};
}

GateLabel make_pair(const GateLabel& a, const GateLabel& b) {
  return GateLabel(a.name + ":" + b.name);
}

const std::vector<GateLabel>& gate_set_1q() {
  static const std::vector<GateLabel> set = {"I",    "X180", "X-180", "Y180", "Y-180", "Z180",
                                             "Z-180", "X90",  "X-90",  "Y90",  "Y-90"};
  return set;
}

const std::vector<GateLabel>& fiducials_1q() {
  static const std::vector<GateLabel> f = {"-", "X180", "Y-90", "X90"};
  return f;
}

const std::vector<GateLabel>& meas_fiducials_1q() {
  static const std::vector<GateLabel> f = {"X180", "Y-90", "X90"};
  return f;
}

const std::vector<GateLabel>& pauli_ops_1q() {
  static const std::vector<GateLabel> p = {"I", "X180", "Y180", "Z180"};
  return p;
}

Ptm rotation_ptm(int n, int generator_index, double angle_rad) {
  const int d = pauli_dim(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  const double c = std::cos(angle_rad), s = std::sin(angle_rad);
  for (int k = 0; k < d; ++k) {
    if (commute_sign(generator_index, k, n) > 0) {
      m(k, k) = 1.0;
    } else {
      // exp(-i t/2 A) P exp(+i t/2 A) = cos(t) P - i sin(t) A P for {A,P}=0;
      // A P is a single Pauli with imaginary phase, so the result is real.
      PauliProduct ap = pauli_product(generator_index, k, n);
      double coef = (ap.phase == 1) ? 1.0 : -1.0;  // -i * i^phase with odd phase
      m(k, k) += c;
      m(ap.axis, k) += s * coef;
    }
  }
  return Ptm(n, m);
}

Ptm ideal_ptm(const GateLabel& g) {
  if (is_noop(g)) return Ptm::identity(1);
  if (auto rot = parse_rotation(g.name)) {
    if (rot->axis == AXIS_I) return Ptm::identity(1);
    return rotation_ptm(1, rot->axis, rot->angle_rad);
  }
  if (g.name == "MS_YY") {
    return rotation_ptm(2, 4 * AXIS_Y + AXIS_Y, kPi / 2);
  }
  if (g.name == "MS_ZZ") {
    Ptm pre = tensor(ideal_ptm(GateLabel("X90")), ideal_ptm(GateLabel("X90")));
    Ptm post = tensor(ideal_ptm(GateLabel("X-90")), ideal_ptm(GateLabel("X-90")));
    return compose(post, compose(ideal_ptm(GateLabel("MS_YY")), pre));
  }
  if (is_pair_gate(g)) {
    auto [a, b] = split_pair(g);
    return tensor(ideal_ptm(a), ideal_ptm(b));
  }
  throw std::invalid_argument("unknown gate label '" + g.name + "'");
}

}  // namespace peclab
