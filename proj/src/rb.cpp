#include "peclab/rb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace peclab {

namespace {

const std::vector<GateLabel>& computational_1q() {
  static const std::vector<GateLabel> set = {"X90", "X-90", "Y90", "Y-90"};
  return set;
}

const std::vector<GateLabel>& interleave_1q() {
  static const std::vector<GateLabel> set = {"I", "X180", "X-180", "Y180", "Y-180",
                                             "Z180", "Z-180"};
  return set;
}

GateLabel random_pair(RngStream& rng) {
  const auto& g1 = gate_set_1q();
  return make_pair(g1[rng.uniform_int(g1.size())], g1[rng.uniform_int(g1.size())]);
}

RBSequence draw_candidate(int n, int length, RngStream& rng) {
  RBSequence seq;
  seq.n = n;
  seq.length = length;
  seq.ops.reserve(2 * length + 1);
  for (int l = 0; l < length; ++l) {
    if (n == 1) {
      seq.ops.push_back(interleave_1q()[rng.uniform_int(7)]);
      seq.ops.push_back(computational_1q()[rng.uniform_int(4)]);
    } else {
      seq.ops.push_back(random_pair(rng));
      seq.ops.push_back(GateLabel(rng.uniform() < 0.5 ? "MS_YY" : "MS_ZZ"));
    }
  }
  seq.ops.push_back(n == 1 ? interleave_1q()[rng.uniform_int(7)] : random_pair(rng));
  return seq;
}

struct Welford {
  double mean = 0.0, m2 = 0.0;
  long count = 0;
  void add(double x) {
    ++count;
    double delta = x - mean;
    mean += delta / double(count);
    m2 += delta * (x - mean);
  }
  double variance() const { return count > 1 ? m2 / double(count - 1) : 0.0; }
};

// Chi^2 of the weighted linear solve for (A, B) at fixed p; outputs A, B.
double profile_chi2(const std::vector<RBPoint>& points, const std::vector<double>& weights,
                    double p, double* a_out, double* b_out) {
  double s_ww = 0, s_wx = 0, s_wy = 0, s_wxx = 0, s_wxy = 0;
  for (size_t i = 0; i < points.size(); ++i) {
    double x = std::pow(p, points[i].length);
    double w = weights[i];
    s_ww += w;
    s_wx += w * x;
    s_wy += w * points[i].mean;
    s_wxx += w * x * x;
    s_wxy += w * x * points[i].mean;
  }
  double det = s_wxx * s_ww - s_wx * s_wx;
  double a, b;
  if (std::abs(det) < 1e-300) {
    a = 0.0;
    b = s_wy / s_ww;
  } else {
    a = (s_wxy * s_ww - s_wx * s_wy) / det;
    b = (s_wxx * s_wy - s_wx * s_wxy) / det;
  }
  double chi2 = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    double r = a * std::pow(p, points[i].length) + b - points[i].mean;
    chi2 += weights[i] * r * r;
  }
  if (a_out) *a_out = a;
  if (b_out) *b_out = b;
  return chi2;
}

}  // namespace

std::vector<RBSequence> generate_sequences(int n, int length, int count, RngStream& rng) {
  if (length < 1) throw std::invalid_argument("generate_sequences: length must be >= 1");
  if (n != 1 && n != 2) throw std::invalid_argument("generate_sequences: n must be 1 or 2");
  std::vector<RBSequence> out;
  long rejected = 0;
  while (static_cast<int>(out.size()) < count) {
    RBSequence cand = draw_candidate(n, length, rng);
    double ideal = ideal_sequence_expectation(cand.ops, n);
    if (std::abs(std::abs(ideal) - 1.0) < 1e-9) {
      cand.ideal_outcome = ideal > 0 ? 1.0 : -1.0;
      out.push_back(std::move(cand));
    } else if (++rejected > 1000000) {
      throw std::runtime_error("generate_sequences: pathological post-selection rate");
    }
  }
  return out;
}

RBResult run_rb(const DeviceSpec& dev, const GstEstimate* est, const RbOptions& opt,
                uint64_t seed, const std::string& stage, std::string* audit) {
  if (opt.mitigated && est == nullptr)
    throw std::invalid_argument("run_rb: mitigated runs need a characterization");
  if (opt.lengths.empty()) throw std::invalid_argument("run_rb: at least one length required");

  CircuitEvaluator eval(dev);
  RBResult result;
  for (size_t li = 0; li < opt.lengths.size(); ++li) {
    int length = opt.lengths[li];
    RngStream gen_rng(seed, stage + "/gen", li);
    std::vector<RBSequence> seqs =
        generate_sequences(dev.n, length, opt.sequences_per_length, gen_rng);

    Welford stats;
    double var_within = 0.0;
    double cost_here = 0.0;
    for (size_t si = 0; si < seqs.size(); ++si) {
      RngStream run_rng(seed, stage + "/run", li * 1000003 + si);
      double survival, err2;
      if (!opt.mitigated) {
        OutcomeCounts counts = eval.sample(seqs[si].ops, opt.shots, run_rng);
        double z = counts.z_parity_mean();
        survival = seqs[si].ideal_outcome * z;
        err2 = std::max(1.0 - z * z, 1.0 / double(opt.shots)) / double(opt.shots);
      } else {
        SequenceDecomps decomps = decompose_sequence(*est, seqs[si].ops);
        MitigatedEstimate m = estimate_mitigated(dev, seqs[si].ops, decomps, opt.circuits,
                                                 opt.shots_per_circuit, run_rng, audit);
        survival = seqs[si].ideal_outcome * m.value;
        err2 = m.std_error * m.std_error;
        cost_here += decomps.total_C / double(seqs.size());
      }
      stats.add(survival);
      var_within += err2 / double(seqs.size() * seqs.size());
    }
    RBPoint point;
    point.length = length;
    point.count = static_cast<int>(seqs.size());
    point.mean = stats.mean;
    // between-sequence scatter and the per-sequence measurement noise both
    // contribute; take the larger scale to avoid zero weights
    double var_between = stats.variance() / double(seqs.size());
    point.std_err = std::sqrt(std::max(var_between, var_within));
    result.points.push_back(point);
    if (opt.mitigated) result.total_C.push_back(cost_here);
  }
  result.fit = fit_decay(result.points, dev.n);
  return result;
}

DecayFit fit_decay(const std::vector<RBPoint>& points, int n) {
  if (points.size() < 3)
    throw std::invalid_argument("fit_decay: need at least 3 distinct lengths");
  std::vector<double> weights(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    double se = points[i].std_err;
    weights[i] = se > 0 ? 1.0 / (se * se) : 1.0;
  }

  // profile chi^2 over p (A and B solved linearly), coarse grid then golden
  double best_p = 1.0, best_chi2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i) {
    double p = 0.2 + (1.2 - 0.2) * double(i) / 1000.0;
    double c = profile_chi2(points, weights, p, nullptr, nullptr);
    if (c < best_chi2 - 1e-15) {
      best_chi2 = c;
      best_p = p;
    }
  }
  double lo = std::max(0.2, best_p - 2e-3), hi = std::min(1.2, best_p + 2e-3);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
  double f1 = profile_chi2(points, weights, x1, nullptr, nullptr);
  double f2 = profile_chi2(points, weights, x2, nullptr, nullptr);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = profile_chi2(points, weights, x1, nullptr, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = profile_chi2(points, weights, x2, nullptr, nullptr);
    }
  }
  DecayFit fit;
  fit.n_points = static_cast<int>(points.size());
  fit.decay = 0.5 * (lo + hi);
  fit.chi2 = profile_chi2(points, weights, fit.decay, &fit.amplitude, &fit.baseline);

  // flat data: the amplitude vanishes and p is undetermined; report no decay
  if (std::abs(fit.amplitude) < 1e-10) {
    fit.decay = 1.0;
    fit.chi2 = profile_chi2(points, weights, fit.decay, &fit.amplitude, &fit.baseline);
  }

  // Gauss-Newton covariance in (A, p, B)
  Eigen::MatrixXd jac(points.size(), 3);
  for (size_t i = 0; i < points.size(); ++i) {
    double L = points[i].length;
    double pl = std::pow(fit.decay, L);
    double w = std::sqrt(weights[i]);
    jac(i, 0) = w * pl;
    jac(i, 1) = w * fit.amplitude * L * std::pow(fit.decay, L - 1);
    jac(i, 2) = w;
  }
  Eigen::Matrix3d jtj = jac.transpose() * jac;
  bool invertible = std::abs(jtj.determinant()) > 1e-30;
  fit.covariance = invertible ? Eigen::Matrix3d(jtj.inverse())
                              : Eigen::Matrix3d(Eigen::Matrix3d::Constant(
                                    std::numeric_limits<double>::quiet_NaN()));
  fit.amplitude_err = std::sqrt(std::max(fit.covariance(0, 0), 0.0));
  fit.decay_err = std::sqrt(std::max(fit.covariance(1, 1), 0.0));
  fit.baseline_err = std::sqrt(std::max(fit.covariance(2, 2), 0.0));

  fit.rate_raw = 1.0 - fit.decay;
  fit.rate_raw_err = fit.decay_err;
  double conv = n == 1 ? 0.5 : 0.75;
  fit.error_rate = conv * fit.rate_raw;
  fit.error_rate_err = conv * fit.rate_raw_err;
  return fit;
}

ValidationReport validate_pauli_assumption(const DeviceSpec& dev, const GstEstimate& est,
                                           const RbOptions& opt, uint64_t seed,
                                           const std::string& stage) {
  if (opt.mitigated)
    throw std::invalid_argument("validate_pauli_assumption: raw runs only");
  ValidationReport report;
  CircuitEvaluator eval(dev);

  for (size_t li = 0; li < opt.lengths.size(); ++li) {
    int length = opt.lengths[li];
    RngStream gen_rng(seed, stage + "/gen", li);
    std::vector<RBSequence> seqs =
        generate_sequences(dev.n, length, opt.sequences_per_length, gen_rng);

    Welford sampled_stats, sim_stats;
    double var_within = 0.0;
    for (size_t si = 0; si < seqs.size(); ++si) {
      RngStream run_rng(seed, stage + "/run", li * 1000003 + si);
      OutcomeCounts counts = eval.sample(seqs[si].ops, opt.shots, run_rng);
      double z = counts.z_parity_mean();
      sampled_stats.add(seqs[si].ideal_outcome * z);
      var_within += std::max(1.0 - z * z, 1.0 / double(opt.shots)) /
                    (double(opt.shots) * double(seqs.size() * seqs.size()));

      // exact forward simulation with the characterized PTMs and SPAM ansatz
      Eigen::VectorXd v = estimated_prep(est).v;
      for (const GateLabel& g : seqs[si].ops) v = estimated_ptm(est, g).m * v;
      double z_model = std::sqrt(double(1 << dev.n)) * v[pauli_dim(dev.n) - 1];
      sim_stats.add(seqs[si].ideal_outcome * z_model);
    }
    RBPoint sp;
    sp.length = length;
    sp.count = static_cast<int>(seqs.size());
    sp.mean = sampled_stats.mean;
    sp.std_err = std::sqrt(std::max(sampled_stats.variance() / double(seqs.size()), var_within));
    report.sampled.points.push_back(sp);

    RBPoint mp = sp;
    mp.mean = sim_stats.mean;
    mp.std_err = std::sqrt(sim_stats.variance() / double(seqs.size()));
    if (mp.std_err <= 0.0) mp.std_err = 1e-9;  // exact points, equalize weights
    report.simulated.points.push_back(mp);
  }
  report.sampled.fit = fit_decay(report.sampled.points, dev.n);
  report.simulated.fit = fit_decay(report.simulated.points, dev.n);
  report.rate_difference = report.sampled.fit.error_rate - report.simulated.fit.error_rate;
  report.rate_difference_err =
      std::hypot(report.sampled.fit.error_rate_err, report.simulated.fit.error_rate_err);
  return report;
}

}  // namespace peclab
