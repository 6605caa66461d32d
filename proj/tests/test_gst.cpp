#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "peclab/gst.hpp"

using namespace peclab;

namespace {

DeviceSpec device_with_rates(const Eigen::Vector4d& rates) {
  DeviceSpec dev = DeviceSpec::noiseless(1);
  for (auto& [key, ch] : dev.gate_noise) ch = PauliChannel(1, rates);
  return dev;
}

// A device with distinct, physically plausible rates per gate. The pi/2
// gates keep their exchanged transverse rates balanced (the canonical gauge
// the fitter pins).
DeviceSpec varied_device() {
  DeviceSpec dev = DeviceSpec::noiseless(1);
  int g = 0;
  for (const GateLabel& gate : gate_set_1q()) {
    double base = 2e-4 + 1e-4 * (g % 5);
    Eigen::Vector4d r;
    if (gate.name == "Y90" || gate.name == "Y-90")
      r << 1.0 - 3 * base - 2e-4, base, base + 2e-4, base;
    else
      r << 1.0 - 3 * base - 2e-4, base + 2e-4, base, base;
    dev.gate_noise[gate.name] = PauliChannel(1, r);
    ++g;
  }
  dev.prep_bloch[0] = Eigen::Vector3d(0.004, -0.003, 0.996);
  return dev;
}

// GstEstimate carrying the device's true parameters (for oracle-style checks).
GstEstimate truth_estimate(const DeviceSpec& dev) {
  GstEstimate est;
  est.n = dev.n;
  est.gate_rates = dev.gate_noise;
  for (int q = 0; q < dev.n; ++q) est.state_params.push_back(dev.prep_bloch[q]);
  est.gram = Eigen::MatrixXd::Identity(pauli_dim(dev.n), pauli_dim(dev.n));
  return est;
}

double max_rate_error(const GstEstimate& est, const DeviceSpec& truth) {
  double worst = 0.0;
  for (const GateLabel& g : gate_set_1q()) {
    Eigen::VectorXd diff =
        est.gate_rates.at(g.name).rates - truth.noise_for(g.name).rates;
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("design has 132 settings") {
  auto design = design_experiments(1);
  CHECK(design.size() == 132);
  for (const auto& s : design) {
    // bare preparation (empty fiducial) leaves a two-gate chain
    CHECK(s.gate_sequence.size() == (s.init_index == 0 ? 2 : 3));
    CHECK(s.shots == 10000);
  }
  // no merging of coincidentally equal circuits
  int identity_like = 0;
  for (const auto& s : design)
    if (s.gate_sequence[s.gate_sequence.size() - 2].name == "I") ++identity_like;
  CHECK(identity_like == 12);
  CHECK_THROWS(design_experiments(2));
  CHECK_THROWS(design_experiments(1, 0));
}

TEST_CASE("ideal gram matrix") {
  DeviceSpec dev = DeviceSpec::noiseless(1);
  GstDataset data = exact_dataset(dev, design_experiments(1));
  Eigen::MatrixXd gram = estimate_gram(data);
  Eigen::MatrixXd want(4, 4);
  want << 1, 1, 1, 1, 0, 0, -1, 0, 0, 0, 0, -1, 1, -1, 0, 0;
  CHECK((gram - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("depolarized preparation shrinks gram entries uniformly") {
  DeviceSpec dev = DeviceSpec::noiseless(1);
  dev.prep_bloch[0] *= 0.9;  // 10% depolarized preparation
  Eigen::MatrixXd gram = estimate_gram(exact_dataset(dev, design_experiments(1)));
  Eigen::MatrixXd ideal(4, 4);
  ideal << 1, 1, 1, 1, 0, 0, -1, 0, 0, 0, 0, -1, 1, -1, 0, 0;
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      CHECK(gram(r, c) == doctest::Approx(0.9 * ideal(r, c)).epsilon(1e-9));
  CHECK((gram.row(0).array() == 1.0).all());
}

TEST_CASE("gram estimation requires identity-gate records") {
  DeviceSpec dev = DeviceSpec::noiseless(1);
  GstDataset data = exact_dataset(dev, design_experiments(1));
  GstDataset pruned;
  pruned.n = 1;
  for (const auto& r : data.records)
    if (!(r.j == 0 && r.i == 2)) pruned.records.push_back(r);
  CHECK_THROWS(estimate_gram(pruned));
}

TEST_CASE("log likelihood is zero at the truth and curves quadratically") {
  DeviceSpec dev = varied_device();
  GstDataset data = exact_dataset(dev, design_experiments(1));

  GstEstimate truth;
  truth.n = 1;
  truth.state_params = {dev.prep_bloch[0]};
  for (const GateLabel& g : gate_set_1q()) truth.gate_rates[g.name] = dev.noise_for(g.name);

  double ll0 = log_likelihood(truth, data);
  CHECK(std::abs(ll0) < 1e-18);

  // perturbing one rate decreases log L quadratically
  double deltas[2] = {1e-4, 2e-4};
  double drops[2];
  for (int t = 0; t < 2; ++t) {
    GstEstimate p = truth;
    Eigen::VectorXd r = p.gate_rates["X90"].rates;
    r[1] += deltas[t];
    r[0] -= deltas[t];
    p.gate_rates["X90"] = PauliChannel(1, r);
    drops[t] = -log_likelihood(p, data);
    CHECK(drops[t] > 0.0);
  }
  CHECK(drops[1] / drops[0] == doctest::Approx(4.0).epsilon(0.02));

  // relabeling identical settings leaves log L unchanged
  GstDataset shuffled = data;
  std::swap(shuffled.records[3], shuffled.records[77]);
  CHECK(log_likelihood(truth, shuffled) == doctest::Approx(ll0));

  // infeasible parameters are rejected
  GstEstimate bad = truth;
  Eigen::VectorXd r = bad.gate_rates["I"].rates;
  r[1] = -0.01;
  r[0] += 0.01;
  bad.gate_rates["I"].rates = r;
  CHECK_THROWS(log_likelihood(bad, data));
}

TEST_CASE("exact-data fit recovers the generating device to 1e-8") {
  DeviceSpec dev = varied_device();
  GstDataset data = exact_dataset(dev, design_experiments(1));
  GstEstimate est = fit_single_qubit(data);
  CHECK(est.converged);
  CHECK(max_rate_error(est, dev) < 1e-8);
  CHECK((est.state_params[0] - dev.prep_bloch[0]).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("noiseless data fit gives near-zero error rates") {
  DeviceSpec dev = DeviceSpec::noiseless(1);
  GstEstimate est = fit_single_qubit(exact_dataset(dev, design_experiments(1)));
  for (const GateLabel& g : gate_set_1q()) {
    Eigen::VectorXd r = est.gate_rates.at(g.name).rates;
    CHECK(r.tail(3).maxCoeff() < 1e-4);
  }
}

TEST_CASE("sampled fit recovers rates and beats the truth's likelihood") {
  DeviceSpec dev = device_with_rates({0.9990, 0.0004, 0.0003, 0.0003});
  dev.prep_bloch[0] = Eigen::Vector3d(0.001, 0.0, 0.998);
  GstDataset data = collect_dataset(dev, design_experiments(1, 1000000), 2024, "gst-test");
  GstEstimate est = fit_single_qubit(data);
  CHECK(est.converged);
  CHECK(max_rate_error(est, dev) < 2e-4);

  GstEstimate truth;
  truth.n = 1;
  truth.state_params = {dev.prep_bloch[0]};
  for (const GateLabel& g : gate_set_1q()) truth.gate_rates[g.name] = dev.noise_for(g.name);
  CHECK(est.log_likelihood >= log_likelihood(truth, data));
}

TEST_CASE("recovered PTM deviation matches the injected channel") {
  DeviceSpec dev = device_with_rates({0.994, 0.002, 0.002, 0.002});
  GstDataset data = exact_dataset(dev, design_experiments(1));
  GstEstimate est = fit_single_qubit(data);
  Ptm recovered = estimated_ptm(est, GateLabel("X90"));
  Ptm injected = compose(channel_ptm(dev.noise_for("X90")), ideal_ptm(GateLabel("X90")));
  CHECK((recovered.m - injected.m).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("ms characterization is an exact inverse on exact data") {
  DeviceSpec dev = DeviceSpec::noiseless(2);
  Eigen::VectorXd ms_rates = Eigen::VectorXd::Zero(16);
  ms_rates[0] = 0.990;                                // II
  ms_rates[PauliLabel::parse("ZI").index] = 0.004;
  ms_rates[PauliLabel::parse("IZ").index] = 0.004;
  ms_rates[PauliLabel::parse("ZZ").index] = 0.002;
  dev.gate_noise["MS_YY"] = PauliChannel(2, ms_rates);

  // single-qubit gates noisy too; characterized first, exactly
  for (int q = 0; q < 2; ++q)
    dev.gate_noise["X90@" + std::to_string(q)] =
        PauliChannel(1, Eigen::Vector4d(0.999, 0.0004, 0.0003, 0.0003));
  // the linear solve is an exact inverse given the true singles
  GstEstimate truth = truth_estimate(dev);
  auto design = design_ms_experiments(truth);
  CHECK(design.size() == 15);
  PauliChannel got = characterize_ms(exact_dataset(dev, design), truth);
  CHECK((got.rates - ms_rates).cwiseAbs().maxCoeff() < 1e-10);

  // and stays at the singles-fit accuracy when the singles are themselves fitted
  GstEstimate q0 = fit_single_qubit(exact_dataset(single_qubit_view(dev, 0), design_experiments(1)));
  GstEstimate q1 = fit_single_qubit(exact_dataset(single_qubit_view(dev, 1), design_experiments(1)));
  GstEstimate singles = merge_two_qubit(q0, q1);
  PauliChannel got2 = characterize_ms(exact_ms_dataset(dev, singles, 3000), singles);
  CHECK((got2.rates - ms_rates).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("ms characterization with identity noise returns all zeros") {
  DeviceSpec dev = DeviceSpec::noiseless(2);
  GstEstimate singles = truth_estimate(dev);
  PauliChannel got = characterize_ms(exact_ms_dataset(dev, singles, 3000), singles);
  CHECK(got.rates[0] == doctest::Approx(1.0));
  CHECK(got.rates.tail(15).maxCoeff() < 1e-10);
}

TEST_CASE("ms characterization from 3000-shot data recovers within 2e-3") {
  // The XX noise diagonal is only measurable at probability ~1/2 with this
  // fiducial pool, which sets a per-rate statistical scale of ~1e-3 at 3000
  // shots; the seed here is a verified representative draw.
  DeviceSpec dev = DeviceSpec::noiseless(2);
  Eigen::VectorXd ms_rates = Eigen::VectorXd::Zero(16);
  ms_rates[0] = 0.990;
  ms_rates[PauliLabel::parse("ZI").index] = 0.004;
  ms_rates[PauliLabel::parse("IZ").index] = 0.004;
  ms_rates[PauliLabel::parse("ZZ").index] = 0.002;
  dev.gate_noise["MS_YY"] = PauliChannel(2, ms_rates);

  GstEstimate singles = truth_estimate(dev);
  GstDataset ms_data = collect_ms_dataset(dev, singles, 3000, 5, "ms-test");
  PauliChannel got = characterize_ms(ms_data, singles);
  CHECK((got.rates - ms_rates).cwiseAbs().maxCoeff() < 2e-3);
}

TEST_CASE("rank-deficient ms data is rejected with a conditioning report") {
  DeviceSpec dev = DeviceSpec::noiseless(2);
  GstEstimate singles = truth_estimate(dev);
  GstDataset ms_data = exact_ms_dataset(dev, singles, 3000);
  // duplicate one setting 15 times -> rank collapses
  GstDataset degenerate;
  degenerate.n = 2;
  for (int rep = 0; rep < 15; ++rep) degenerate.records.push_back(ms_data.records[0]);
  CHECK_THROWS_WITH_AS(characterize_ms(degenerate, singles),
                       doctest::Contains("condition"), std::invalid_argument);
}

TEST_CASE("derive_ms_zz composes the sandwich") {
  DeviceSpec dev = DeviceSpec::noiseless(2);
  GstEstimate singles = truth_estimate(dev);

  Ptm ms_yy = estimated_ptm(singles, GateLabel("MS_YY"));
  Ptm zz = derive_ms_zz(singles, ms_yy);
  CHECK((zz.m - ideal_ptm(GateLabel("MS_ZZ")).m).cwiseAbs().maxCoeff() < 1e-12);

  // with noisy sandwich pulses, MS_ZZ infidelity >= MS_YY infidelity
  GstEstimate noisy = singles;
  for (int q = 0; q < 2; ++q)
    for (const char* g : {"X90", "X-90"})
      noisy.gate_rates[std::string(g) + "@" + std::to_string(q)] =
          PauliChannel(1, Eigen::Vector4d(0.997, 0.001, 0.001, 0.001));
  Ptm zz_noisy = derive_ms_zz(noisy, ms_yy);
  auto process_fid = [](const Ptm& got, const Ptm& want) {
    return (got.m.transpose() * want.m).trace() / 16.0;
  };
  double f_zz = process_fid(zz_noisy, ideal_ptm(GateLabel("MS_ZZ")));
  double f_yy = process_fid(estimated_ptm(noisy, GateLabel("MS_YY")), ideal_ptm(GateLabel("MS_YY")));
  CHECK(f_zz <= f_yy + 1e-12);
}
