#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <vector>

#include "oracles.hpp"
#include "peclab/channel.hpp"
#include "peclab/gates.hpp"
#include "peclab/pauli.hpp"
#include "peclab/ptm.hpp"
#include "peclab/rng.hpp"

using namespace peclab;

namespace {

// Everything 2-qubit GST touches: the 121 tensor pairs plus the entanglers.
std::vector<GateLabel> two_qubit_gate_set() {
  std::vector<GateLabel> out;
  for (const GateLabel& a : gate_set_1q())
    for (const GateLabel& b : gate_set_1q()) out.push_back(make_pair(a, b));
  out.push_back(GateLabel("MS_YY"));
  out.push_back(GateLabel("MS_ZZ"));
  return out;
}

Eigen::VectorXd random_simplex(int d, RngStream& rng) {
  Eigen::VectorXd r(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    r[i] = -std::log(1.0 - rng.uniform());
    sum += r[i];
  }
  return r / sum;
}

}  // namespace

TEST_CASE("pauli label round trip and ordering") {
  CHECK(PauliLabel(1, 2).str() == "Y");
  CHECK(PauliLabel(2, 6).str() == "XY");
  CHECK(PauliLabel::parse("ZZ").index == 15);
  CHECK(PauliLabel::parse("XI").index == 4);
  for (int idx = 0; idx < 16; ++idx) CHECK(PauliLabel::parse(PauliLabel(2, idx).str()).index == idx);
  CHECK_THROWS(PauliLabel(1, 4));
  CHECK_THROWS(PauliLabel::parse("XQ"));
}

TEST_CASE("pauli product phases match matrix multiplication") {
  for (int n : {1, 2}) {
    const int d = pauli_dim(n);
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        PauliProduct pr = pauli_product(j, k, n);
        oracle::CMat lhs = oracle::pauli_matrix(j, n) * oracle::pauli_matrix(k, n);
        oracle::cplx phase = std::pow(oracle::cplx(0, 1), pr.phase);
        oracle::CMat rhs = phase * oracle::pauli_matrix(pr.axis, n);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
        // commute sign consistency
        oracle::CMat comm = oracle::pauli_matrix(j, n) * oracle::pauli_matrix(k, n) -
                            double(commute_sign(j, k, n)) * oracle::pauli_matrix(k, n) *
                                oracle::pauli_matrix(j, n);
        CHECK(comm.cwiseAbs().maxCoeff() < 1e-14);
      }
    }
  }
}

TEST_CASE("ideal_ptm matches the complex-matrix oracle for every gate") {
  for (const GateLabel& g : gate_set_1q()) {
    Eigen::MatrixXd ref = oracle::ptm_of_unitary(oracle::unitary_for_gate(g), 1);
    CHECK((ideal_ptm(g).m - ref).cwiseAbs().maxCoeff() < 1e-13);
  }
  for (const GateLabel& g : two_qubit_gate_set()) {
    Eigen::MatrixXd ref = oracle::ptm_of_unitary(oracle::unitary_for_gate(g), 2);
    CHECK((ideal_ptm(g).m - ref).cwiseAbs().maxCoeff() < 1e-13);
  }
  CHECK_THROWS(ideal_ptm(GateLabel("X45")));
  CHECK_THROWS(ideal_ptm(GateLabel("H")));
}

TEST_CASE("ideal PTMs are orthogonal and trace preserving") {
  auto check_gate = [](const GateLabel& g) {
    Ptm r = ideal_ptm(g);
    const int d = pauli_dim(r.n);
    Eigen::MatrixXd gram = r.m.transpose() * r.m;
    CHECK((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.m(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.m.row(0).tail(d - 1).cwiseAbs().maxCoeff() < 1e-14);
  };
  for (const GateLabel& g : gate_set_1q()) check_gate(g);
  for (const GateLabel& g : fiducials_1q()) check_gate(g);
  for (const GateLabel& g : two_qubit_gate_set()) check_gate(g);
}

TEST_CASE("frozen single-gate PTMs") {
  CHECK((ideal_ptm(GateLabel("I")).m - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() ==
        0.0);

  Eigen::Vector4d zdiag(1, -1, -1, 1);
  CHECK((ideal_ptm(GateLabel("Z180")).m - Eigen::MatrixXd(zdiag.asDiagonal()))
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  // X90 maps Y -> Z and Z -> -Y with X fixed.
  Eigen::MatrixXd x90 = ideal_ptm(GateLabel("X90")).m;
  CHECK(x90(AXIS_X, AXIS_X) == doctest::Approx(1.0));
  CHECK(x90(AXIS_Z, AXIS_Y) == doctest::Approx(1.0));
  CHECK(x90(AXIS_Y, AXIS_Z) == doctest::Approx(-1.0));
  CHECK(std::abs(x90(AXIS_Y, AXIS_Y)) < 1e-15);
  CHECK(std::abs(x90(AXIS_Z, AXIS_Z)) < 1e-15);
}

TEST_CASE("fiducials prepare the expected states from |0>") {
  // Y-90 |0> = |1>_X (Bloch -x), X90 |0> = |1>_Y (Bloch -y), X180 |0> = |1>.
  Eigen::VectorXd v0 = ket0_state(1).v;
  auto bloch_after = [&](const char* g) -> Eigen::Vector3d {
    Eigen::VectorXd v = ideal_ptm(GateLabel(g)).m * v0;
    return Eigen::Vector3d(v[1], v[2], v[3]) * std::sqrt(2.0);
  };
  CHECK((bloch_after("X180") - Eigen::Vector3d(0, 0, -1)).norm() < 1e-14);
  CHECK((bloch_after("Y-90") - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-14);
  CHECK((bloch_after("X90") - Eigen::Vector3d(0, -1, 0)).norm() < 1e-14);
}

TEST_CASE("channel_ptm diagonal values") {
  CHECK((channel_ptm(PauliChannel::identity(1)).m - Eigen::MatrixXd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  PauliChannel depol(1, Eigen::Vector4d(0.97, 0.01, 0.01, 0.01));
  Eigen::Vector4d want(1.0, 0.96, 0.96, 0.96);
  CHECK((channel_ptm(depol).m.diagonal() - want).cwiseAbs().maxCoeff() < 1e-15);

  PauliChannel xerr(1, Eigen::Vector4d(0.97, 0.03, 0.0, 0.0));
  Eigen::Vector4d want_x(1.0, 1.0, 0.94, 0.94);
  CHECK((channel_ptm(xerr).m.diagonal() - want_x).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS(channel_ptm(PauliChannel(1, Eigen::Vector4d(1.01, -0.01, 0.0, 0.0))));
  CHECK_THROWS(channel_ptm(PauliChannel(1, Eigen::Vector4d(0.5, 0.1, 0.1, 0.1))));
}

TEST_CASE("channel_ptm matches the complex-channel oracle on random rates") {
  RngStream rng(7, "channel-oracle");
  for (int n : {1, 2}) {
    for (int rep = 0; rep < 8; ++rep) {
      Eigen::VectorXd rates = random_simplex(pauli_dim(n), rng);
      PauliChannel ch(n, rates);
      Eigen::MatrixXd ref = oracle::ptm_of_pauli_channel(rates, n);
      Ptm got = channel_ptm(ch);
      CHECK((got.m - ref).cwiseAbs().maxCoeff() < 1e-12);
      // diagonal, bounded, trace preserving
      CHECK(got.m(0, 0) == doctest::Approx(1.0));
      CHECK(got.m.diagonal().cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
      Eigen::MatrixXd off = got.m;
      off.diagonal().setZero();
      CHECK(off.cwiseAbs().maxCoeff() == 0.0);
      // rates round trip through the diagonal
      CHECK((rates_from_diagonal(channel_diagonal(ch), n) - rates).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("compose basics and the MS_ZZ sandwich identity") {
  Ptm x90 = ideal_ptm(GateLabel("X90"));
  CHECK((compose(Ptm::identity(1), x90).m - x90.m).cwiseAbs().maxCoeff() == 0.0);
  CHECK((compose(x90, x90).m - ideal_ptm(GateLabel("X180")).m).cwiseAbs().maxCoeff() < 1e-14);

  Ptm pre = tensor(x90, x90);
  Ptm post = tensor(ideal_ptm(GateLabel("X-90")), ideal_ptm(GateLabel("X-90")));
  Ptm sandwich = compose(post, compose(ideal_ptm(GateLabel("MS_YY")), pre));
  CHECK((sandwich.m - ideal_ptm(GateLabel("MS_ZZ")).m).cwiseAbs().maxCoeff() < 1e-13);
  // and the direct complex-matrix route agrees
  Eigen::MatrixXd ref =
      oracle::ptm_of_unitary(oracle::pauli_rotation_unitary(4 * AXIS_Z + AXIS_Z, 2, M_PI / 2), 2);
  CHECK((sandwich.m - ref).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS(compose(Ptm::identity(1), Ptm::identity(2)));
}

TEST_CASE("compose agrees with direct construction over G1 x G1") {
  // Whenever U_a U_b equals a named gate up to global phase, the composed
  // PTMs must match that gate's PTM exactly.
  int matched = 0;
  for (const GateLabel& a : gate_set_1q()) {
    for (const GateLabel& b : gate_set_1q()) {
      oracle::CMat u = oracle::unitary_for_gate(a) * oracle::unitary_for_gate(b);
      for (const GateLabel& c : gate_set_1q()) {
        oracle::CMat v = oracle::unitary_for_gate(c);
        if (std::abs(std::abs((u.adjoint() * v).trace()) - 2.0) < 1e-12) {
          Ptm composed = compose(ideal_ptm(a), ideal_ptm(b));
          CHECK((composed.m - ideal_ptm(c).m).cwiseAbs().maxCoeff() < 1e-13);
          ++matched;
          break;
        }
      }
    }
  }
  CHECK(matched > 30);  // plenty of pairs compose to named gates
}

TEST_CASE("expectation values") {
  ObservableVector e0 = ket0_projector(1);
  PauliVector rho0 = ket0_state(1);
  CHECK(expectation(e0, {}, rho0) == doctest::Approx(1.0));
  CHECK(expectation(e0, {ideal_ptm(GateLabel("X180"))}, rho0) ==
        doctest::Approx(0.0).epsilon(1e-14));
  Ptm noise = channel_ptm(PauliChannel(1, Eigen::Vector4d(0.97, 0.01, 0.01, 0.01)));
  CHECK(expectation(e0, {noise}, rho0) == doctest::Approx(0.98));

  PauliVector bad(2, Eigen::VectorXd::Zero(16));
  CHECK_THROWS(expectation(e0, {}, bad));
}

TEST_CASE("pauli observables on ideally reachable states are in {-1,0,1}") {
  RngStream rng(11, "reachable");
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd v = ket0_state(1).v;
    int len = 1 + int(rng.uniform_int(6));
    for (int s = 0; s < len; ++s)
      v = ideal_ptm(gate_set_1q()[rng.uniform_int(11)]).m * v;
    for (int axis : {AXIS_X, AXIS_Y, AXIS_Z}) {
      double exp_val = v[axis] * std::sqrt(2.0);
      double nearest = std::round(exp_val);
      CHECK(std::abs(exp_val - nearest) < 1e-12);
      CHECK(std::abs(nearest) <= 1.0);
    }
  }
}

TEST_CASE("tensor structure") {
  CHECK((tensor(Ptm::identity(1), Ptm::identity(1)).m - Eigen::MatrixXd::Identity(16, 16))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  Ptm zi = tensor(ideal_ptm(GateLabel("Z180")), Ptm::identity(1));
  for (int idx = 0; idx < 16; ++idx) {
    int first_axis = idx / 4;
    double want = (first_axis == AXIS_X || first_axis == AXIS_Y) ? -1.0 : 1.0;
    CHECK(zi.m(idx, idx) == doctest::Approx(want));
  }

  // tensor of trace-preserving maps is trace preserving
  RngStream rng(3, "tensor-tp");
  Ptm a = compose(channel_ptm(PauliChannel(1, random_simplex(4, rng))),
                  ideal_ptm(GateLabel("Y90")));
  Ptm b = compose(channel_ptm(PauliChannel(1, random_simplex(4, rng))),
                  ideal_ptm(GateLabel("X-90")));
  Ptm t = tensor(a, b);
  CHECK(t.m(0, 0) == doctest::Approx(1.0));
  CHECK(t.m.row(0).tail(15).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS(tensor(t, a));
}

TEST_CASE("state and observable invariants") {
  PauliVector rho0 = ket0_state(1);
  CHECK(rho0.v[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(rho0.v.norm() <= 1.0 + 1e-12);
  CHECK(rho0.pauli_expectation(AXIS_Z) == doctest::Approx(1.0));

  PauliVector rho00 = ket0_state(2);
  CHECK(rho00.v[0] == doctest::Approx(0.5));
  CHECK(rho00.v.norm() == doctest::Approx(1.0));

  // POVM element evaluates inside [0,1] on random mixed states
  RngStream rng(5, "povm");
  ObservableVector e0 = ket0_projector(1);
  for (int rep = 0; rep < 40; ++rep) {
    Eigen::Vector3d r(2 * rng.uniform() - 1, 2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
    if (r.norm() > 1.0) r /= r.norm() * 1.0001;
    double p = expectation(e0, {}, state_from_bloch(r));
    CHECK(p >= -1e-12);
    CHECK(p <= 1.0 + 1e-12);
  }
}
