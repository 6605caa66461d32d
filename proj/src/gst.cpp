#include "peclab/gst.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace peclab {

namespace {

constexpr int kGates1q = 11;

const std::vector<Eigen::Matrix4d>& ideal_ptms_1q() {
  static const std::vector<Eigen::Matrix4d> ptms = [] {
    std::vector<Eigen::Matrix4d> v;
    for (const GateLabel& g : gate_set_1q()) v.push_back(ideal_ptm(g).m);
    return v;
  }();
  return ptms;
}

int gate_index_1q(const std::string& name) {
  const auto& set = gate_set_1q();
  for (int idx = 0; idx < kGates1q; ++idx)
    if (set[idx].name == name) return idx;
  throw std::invalid_argument("gst: '" + name + "' is not in the single-qubit gate set");
}

double variance_of(double freq, long shots) {
  double var = freq * (1.0 - freq) / double(shots);
  return std::max(var, 1.0 / (4.0 * double(shots) * double(shots)));
}

// Noise diagonals (1, dx, dy, dz) from rates (pI, px, py, pz).
Eigen::Vector4d diag_from_rates(const Eigen::VectorXd& r) {
  return {1.0, 1.0 - 2.0 * (r[2] + r[3]), 1.0 - 2.0 * (r[1] + r[3]), 1.0 - 2.0 * (r[1] + r[2])};
}

struct Model1Q {
  Eigen::Vector3d bloch;
  std::array<Eigen::Vector4d, kGates1q> diag;
};

double predict(const Model1Q& m, int i, int j, int k) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Vector4d v(s, s * m.bloch.x(), s * m.bloch.y(), s * m.bloch.z());
  auto apply = [&](int g) {
    v = ideal_ptms_1q()[g] * v;
    v = m.diag[g].cwiseProduct(v).eval();
  };
  if (int fid = prep_fiducial_gate_index()[i]; fid >= 0) apply(fid);
  apply(j);
  apply(meas_fiducial_gate_index()[k]);
  return s * (v[0] + v[3]);
}

// theta layout: [bloch_x, bloch_y, bloch_z, logits(gate 0: x,y,z), ...]
Model1Q model_from_theta(const Eigen::VectorXd& theta) {
  Model1Q m;
  m.bloch = theta.head<3>();
  for (int g = 0; g < kGates1q; ++g) {
    double ex = std::exp(theta[3 + 3 * g + 0]);
    double ey = std::exp(theta[3 + 3 * g + 1]);
    double ez = std::exp(theta[3 + 3 * g + 2]);
    double z = 1.0 + ex + ey + ez;
    Eigen::Vector4d rates(1.0 / z, ex / z, ey / z, ez / z);
    m.diag[g] = diag_from_rates(rates);
  }
  return m;
}

Eigen::VectorXd rates_of_gate(const Eigen::VectorXd& theta, int g) {
  double ex = std::exp(theta[3 + 3 * g + 0]);
  double ey = std::exp(theta[3 + 3 * g + 1]);
  double ez = std::exp(theta[3 + 3 * g + 2]);
  double z = 1.0 + ex + ey + ez;
  Eigen::Vector4d r(1.0 / z, ex / z, ey / z, ez / z);
  return r;
}

struct LmResult {
  Eigen::VectorXd theta;
  double cost = 0.0;
  bool converged = false;
};

// Standard Levenberg-Marquardt with a numeric forward-difference Jacobian.
LmResult levenberg_marquardt(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& resid,
                             Eigen::VectorXd theta, int max_iter) {
  const int n_param = static_cast<int>(theta.size());
  double lambda = 1e-3;
  Eigen::VectorXd r = resid(theta);
  double cost = r.squaredNorm();
  bool converged = false;

  for (int iter = 0; iter < max_iter; ++iter) {
    if (cost < 1e-26) {
      converged = true;
      break;
    }
    Eigen::MatrixXd jac(r.size(), n_param);
    for (int p = 0; p < n_param; ++p) {
      double h = 1e-7 * std::max(1.0, std::abs(theta[p]));
      Eigen::VectorXd tp = theta;
      tp[p] += h;
      jac.col(p) = (resid(tp) - r) / h;
    }
    Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() < 1e-12) {
      converged = true;
      break;
    }
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    bool stepped = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      Eigen::VectorXd delta = a.ldlt().solve(-grad);
      Eigen::VectorXd trial = theta + delta;
      for (int p = 3; p < n_param; ++p) trial[p] = std::clamp(trial[p], -40.0, 5.0);
      Eigen::VectorXd rt = resid(trial);
      double ct = rt.squaredNorm();
      if (ct < cost) {
        double step = (trial - theta).norm();
        theta = trial;
        r = rt;
        cost = ct;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (step < 1e-13 * (1.0 + theta.norm())) {
          converged = true;
        }
        break;
      }
      lambda *= 4.0;
      if (lambda > 1e14) break;
    }
    if (!stepped || converged) {
      converged = converged || !stepped;
      // !stepped means no downhill direction left at machine precision
      break;
    }
  }
  return {theta, cost, converged};
}

// Euclidean projection onto the probability simplex: zeroes the negative
// tail and spreads the correction over the surviving entries, which keeps
// the dominant rate unbiased (a multiplicative renormalization would shift
// it by the entire clamped mass).
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (int i = 0; i < n; ++i) {
    cum += u[i];
    double t = (cum - 1.0) / double(i + 1);
    if (i + 1 == n || u[i + 1] <= t) {
      theta = t;
      if (i + 1 < n) {
        // confirm the support found
        bool ok = u[i] > t;
        if (ok) break;
      } else {
        break;
      }
    }
  }
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = std::max(v[i] - theta, 0.0);
  out /= out.sum();  // guard against rounding
  return out;
}

Eigen::RowVectorXd e00_row() {
  Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(16);
  e[0] = e[3] = e[12] = e[15] = 0.5;
  return e;
}

struct MsRow {
  Eigen::VectorXd w;   // 16 ansatz weights, m = w . diag(N)
  double ideal_prob;   // noiseless prediction
  double sigma;        // binomial noise scale at the ideal probability
};

GateLabel prep_pair_label(int i) {
  return make_pair(fiducials_1q()[i / 4], fiducials_1q()[i % 4]);
}

GateLabel meas_pair_label(int k) {
  return make_pair(meas_fiducials_1q()[k / 3], meas_fiducials_1q()[k % 3]);
}

// Design-time noise scale: assume at least half-percent-level deviations, so
// settings with ideal probability exactly 0 or 1 are not over-trusted.
double design_sigma(double p_ideal, long shots) {
  double p = std::clamp(p_ideal, 0.005, 0.995);
  return std::sqrt(p * (1.0 - p) / double(shots));
}

MsRow ms_row(const GstEstimate& singles, int i, int k, long shots) {
  static const Eigen::MatrixXd ideal_ms = ideal_ptm(GateLabel("MS_YY")).m;
  Eigen::RowVectorXd e = e00_row() * estimated_ptm(singles, meas_pair_label(k)).m;
  Eigen::VectorXd v = ideal_ms * (estimated_ptm(singles, prep_pair_label(i)).m *
                                  estimated_prep(singles).v);
  MsRow row;
  row.w = e.transpose().cwiseProduct(v);
  Eigen::RowVectorXd e_id = e00_row() * ideal_ptm(meas_pair_label(k)).m;
  Eigen::VectorXd v_id = ideal_ms * (ideal_ptm(prep_pair_label(i)).m * ket0_state(2).v);
  row.ideal_prob = e_id * v_id;
  row.sigma = design_sigma(row.ideal_prob, shots);
  return row;
}

}  // namespace

const std::vector<int>& prep_fiducial_gate_index() {
  static const std::vector<int> idx = [] {
    std::vector<int> v;
    for (const GateLabel& g : fiducials_1q())
      v.push_back(is_noop(g) ? -1 : gate_index_1q(g.name));
    return v;
  }();
  return idx;
}

const std::vector<int>& meas_fiducial_gate_index() {
  static const std::vector<int> idx = [] {
    std::vector<int> v;
    for (const GateLabel& g : meas_fiducials_1q()) v.push_back(gate_index_1q(g.name));
    return v;
  }();
  return idx;
}

ExperimentalSetting setting_for(int i, int j, int k, long shots) {
  ExperimentalSetting s;
  s.init_index = i;
  s.meas_fiducial = k;
  s.shots = shots;
  if (!is_noop(fiducials_1q()[i])) s.gate_sequence.push_back(fiducials_1q()[i]);
  s.gate_sequence.push_back(gate_set_1q()[j]);
  s.gate_sequence.push_back(meas_fiducials_1q()[k]);
  return s;
}

std::vector<ExperimentalSetting> design_experiments(int n, long shots) {
  if (n != 1)
    throw std::invalid_argument(
        "design_experiments: only the single-qubit design is fixed; the two-qubit MS step "
        "needs a singles estimate (design_ms_experiments)");
  if (shots < 1) throw std::invalid_argument("design_experiments: shots must be >= 1");
  std::vector<ExperimentalSetting> settings;
  settings.reserve(4 * kGates1q * 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < kGates1q; ++j)
      for (int k = 0; k < 3; ++k) settings.push_back(setting_for(i, j, k, shots));
  return settings;
}

namespace {

int middle_gate_index(const ExperimentalSetting& s) {
  if (s.gate_sequence.size() < 2 || s.gate_sequence.size() > 3)
    throw std::invalid_argument("gst: setting is not a fiducial-gate-fiducial sandwich");
  const std::string& name = s.gate_sequence[s.gate_sequence.size() - 2].name;
  if (name == "MS_YY") return 0;
  return gate_index_1q(name);
}

}  // namespace

GstDataset collect_dataset(const DeviceSpec& dev, const std::vector<ExperimentalSetting>& design,
                           uint64_t seed, const std::string& stage) {
  GstDataset data;
  data.n = dev.n;
  data.records.reserve(design.size());
  for (size_t idx = 0; idx < design.size(); ++idx) {
    const ExperimentalSetting& s = design[idx];
    RngStream rng(seed, stage, idx);
    ShotRecord rec = run_setting(dev, s, rng);
    data.records.push_back(GstRecord{s.init_index, middle_gate_index(s), s.meas_fiducial,
                                     rec.shots, double(rec.zeros_count) / double(rec.shots)});
  }
  return data;
}

GstDataset exact_dataset(const DeviceSpec& dev, const std::vector<ExperimentalSetting>& design) {
  GstDataset data;
  data.n = dev.n;
  data.records.reserve(design.size());
  for (const ExperimentalSetting& s : design) {
    data.records.push_back(GstRecord{s.init_index, middle_gate_index(s), s.meas_fiducial, s.shots,
                                     exact_setting_probability(dev, s)});
  }
  return data;
}

Eigen::MatrixXd estimate_gram(const GstDataset& data) {
  if (data.n != 1)
    throw std::invalid_argument("estimate_gram: single-qubit datasets only; two-qubit Gram "
                                "matrices are tensored from the per-qubit ones");
  // average identity-gate records per (i, k)
  Eigen::Matrix<double, 4, 3> freq_sum = Eigen::Matrix<double, 4, 3>::Zero();
  Eigen::Matrix<double, 4, 3> weight = Eigen::Matrix<double, 4, 3>::Zero();
  for (const GstRecord& r : data.records) {
    if (r.j != 0) continue;
    freq_sum(r.i, r.k) += r.freq * double(r.shots);
    weight(r.i, r.k) += double(r.shots);
  }
  if ((weight.array() <= 0.0).any())
    throw std::invalid_argument("estimate_gram: missing state/measurement combinations");

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(4, 4);
  gram.row(0).setOnes();
  // measurement fiducials {X180, Y-90, X90} estimate -Z, X, Y
  const int row_of_k[3] = {AXIS_Z, AXIS_X, AXIS_Y};
  const double sign_of_k[3] = {-1.0, 1.0, 1.0};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 3; ++k) {
      double f = freq_sum(i, k) / weight(i, k);
      gram(row_of_k[k], i) = sign_of_k[k] * (2.0 * f - 1.0);
    }
  return gram;
}

double log_likelihood(const GstEstimate& params, const GstDataset& data) {
  if (params.n != 1 || data.n != 1)
    throw std::invalid_argument("log_likelihood: single-qubit only");
  Model1Q m;
  m.bloch = params.state_params.at(0);
  for (int g = 0; g < kGates1q; ++g) {
    const PauliChannel& ch = params.gate_rates.at(gate_set_1q()[g].name);
    ch.validate(1e-9);
    m.diag[g] = diag_from_rates(ch.rates);
  }
  double acc = 0.0;
  for (const GstRecord& r : data.records) {
    double mm = predict(m, r.i, r.j, r.k);
    acc -= (mm - r.freq) * (mm - r.freq) / variance_of(r.freq, r.shots);
  }
  return acc;
}

GstEstimate fit_single_qubit(const GstDataset& data) {
  if (data.n != 1) throw std::invalid_argument("fit_single_qubit: single-qubit data required");
  // informational completeness: every (i, j, k) combination must be present
  std::vector<bool> seen(4 * kGates1q * 3, false);
  for (const GstRecord& r : data.records) {
    if (r.i < 0 || r.i >= 4 || r.j < 0 || r.j >= kGates1q || r.k < 0 || r.k >= 3)
      throw std::invalid_argument("fit_single_qubit: record indices out of range");
    seen[(r.i * kGates1q + r.j) * 3 + r.k] = true;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    throw std::invalid_argument("fit_single_qubit: dataset not informationally complete");

  std::vector<double> inv_sigma(data.records.size());
  for (size_t s = 0; s < data.records.size(); ++s)
    inv_sigma[s] = 1.0 / std::sqrt(variance_of(data.records[s].freq, data.records[s].shots));

  // A +-pi/2 rotation exchanges the two transverse Pauli axes, which leaves
  // the split of the exchanged error rates within each {G90, G-90} pair
  // undetermined by fiducial-sandwich data (an exact flat direction of the
  // likelihood). Pin the canonical representative where the exchanged-pair
  // asymmetries cancel across the pair; the penalties act only along those
  // flat directions.
  const int x90 = gate_index_1q("X90"), xm90 = gate_index_1q("X-90");
  const int y90 = gate_index_1q("Y90"), ym90 = gate_index_1q("Y-90");
  const double gauge_weight = 1e4;

  auto residuals = [&](const Eigen::VectorXd& theta) {
    Model1Q m = model_from_theta(theta);
    Eigen::VectorXd r(data.records.size() + 2);
    for (size_t s = 0; s < data.records.size(); ++s) {
      const GstRecord& rec = data.records[s];
      r[s] = (predict(m, rec.i, rec.j, rec.k) - rec.freq) * inv_sigma[s];
    }
    auto split = [&](int g, int a, int b) {
      Eigen::VectorXd p = rates_of_gate(theta, g);
      return p[a] - p[b];
    };
    r[data.records.size()] =
        gauge_weight * (split(x90, AXIS_Y, AXIS_Z) + split(xm90, AXIS_Y, AXIS_Z));
    r[data.records.size() + 1] =
        gauge_weight * (split(y90, AXIS_X, AXIS_Z) + split(ym90, AXIS_X, AXIS_Z));
    return r;
  };

  Eigen::VectorXd theta0 = Eigen::VectorXd::Constant(3 + 3 * kGates1q, -9.0);
  theta0.head<3>() = Eigen::Vector3d(0.0, 0.0, 1.0);
  LmResult res = levenberg_marquardt(residuals, theta0, 400);

  GstEstimate est;
  est.n = 1;
  est.state_params = {res.theta.head<3>()};
  for (int g = 0; g < kGates1q; ++g)
    est.gate_rates[gate_set_1q()[g].name] = PauliChannel(1, rates_of_gate(res.theta, g));
  est.gram = estimate_gram(data);
  est.log_likelihood = -res.cost;
  est.converged = res.converged;
  return est;
}

GstEstimate merge_two_qubit(const GstEstimate& q0, const GstEstimate& q1) {
  if (q0.n != 1 || q1.n != 1)
    throw std::invalid_argument("merge_two_qubit: single-qubit estimates required");
  GstEstimate est;
  est.n = 2;
  for (const auto& [name, ch] : q0.gate_rates) est.gate_rates[name + "@0"] = ch;
  for (const auto& [name, ch] : q1.gate_rates) est.gate_rates[name + "@1"] = ch;
  est.state_params = {q0.state_params[0], q1.state_params[0]};
  est.gram = Eigen::MatrixXd(16, 16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      est.gram.block<4, 4>(4 * a, 4 * b) = q0.gram(a, b) * q1.gram;
  est.log_likelihood = q0.log_likelihood + q1.log_likelihood;
  est.converged = q0.converged && q1.converged;
  return est;
}

std::vector<ExperimentalSetting> design_ms_experiments(const GstEstimate& singles, long shots) {
  if (singles.n != 2)
    throw std::invalid_argument("design_ms_experiments: two-qubit singles estimate required");
  struct Candidate {
    int i, k;
    Eigen::VectorXd a;  // 15 free columns of the ansatz row, whitened by sigma
  };
  std::vector<Candidate> candidates;
  candidates.reserve(16 * 9);
  for (int i = 0; i < 16; ++i) {
    for (int k = 0; k < 9; ++k) {
      MsRow row = ms_row(singles, i, k, shots);
      candidates.push_back({i, k, row.w.tail(15) / row.sigma});
    }
  }

  // Greedy A-optimal selection: at each step add the setting that most
  // reduces the propagated variance of the recovered rates,
  // trace(S cov(d) S^T)/256 with cov(d) = (A^T A + eps I)^-1. The whitening
  // already favors ideal probabilities near 0 or 1.
  Eigen::MatrixXd weight = Eigen::MatrixXd::Zero(15, 15);
  for (int j = 0; j < 16; ++j) {
    Eigen::VectorXd s_j(15);
    for (int l = 1; l < 16; ++l) s_j[l - 1] = commute_sign(j, l, 2) / 16.0;
    weight += s_j * s_j.transpose();
  }
  const double eps = 1e-7;
  Eigen::MatrixXd p_inv = Eigen::MatrixXd::Identity(15, 15) / eps;
  std::vector<bool> used(candidates.size(), false);
  std::vector<ExperimentalSetting> settings;
  while (settings.size() < 15) {
    int best = -1;
    double best_gain = 1e-12;
    for (size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      const Eigen::VectorXd& r = candidates[c].a;
      Eigen::VectorXd pr = p_inv * r;
      double gain = pr.dot(weight * pr) / (1.0 + r.dot(pr));
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<int>(c);
      }
    }
    if (best < 0)
      throw std::invalid_argument("design_ms_experiments: cannot reach rank 15 with the "
                                  "characterized fiducials");
    used[best] = true;
    const Eigen::VectorXd& r = candidates[best].a;
    Eigen::VectorXd pr = p_inv * r;
    p_inv -= (pr * pr.transpose()) / (1.0 + r.dot(pr));

    ExperimentalSetting s;
    s.init_index = candidates[best].i;
    s.meas_fiducial = candidates[best].k;
    s.shots = shots;
    if (candidates[best].i != 0) s.gate_sequence.push_back(prep_pair_label(candidates[best].i));
    s.gate_sequence.push_back(GateLabel("MS_YY"));
    s.gate_sequence.push_back(meas_pair_label(candidates[best].k));
    settings.push_back(s);
  }
  return settings;
}

GstDataset collect_ms_dataset(const DeviceSpec& dev, const GstEstimate& singles, long shots,
                              uint64_t seed, const std::string& stage) {
  return collect_dataset(dev, design_ms_experiments(singles, shots), seed, stage);
}

GstDataset exact_ms_dataset(const DeviceSpec& dev, const GstEstimate& singles, long shots) {
  return exact_dataset(dev, design_ms_experiments(singles, shots));
}

PauliChannel characterize_ms(const GstDataset& ms_data, const GstEstimate& singles) {
  if (ms_data.n != 2 || singles.n != 2)
    throw std::invalid_argument("characterize_ms: two-qubit data and singles required");
  const int m = static_cast<int>(ms_data.records.size());
  if (m < 15) throw std::invalid_argument("characterize_ms: need at least 15 settings");
  Eigen::MatrixXd a(m, 15);
  Eigen::VectorXd b(m);
  for (int s = 0; s < m; ++s) {
    const GstRecord& r = ms_data.records[s];
    MsRow row = ms_row(singles, r.i, r.k, r.shots);
    double sigma = std::sqrt(variance_of(r.freq, r.shots));
    a.row(s) = row.w.tail(15).transpose() / sigma;
    b[s] = (r.freq - row.w[0]) / sigma;  // identity diagonal entry fixed at 1
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues().maxCoeff();
  double smin = svd.singularValues().minCoeff();
  int rank = (svd.singularValues().array() > smax * 1e-10).count();
  if (rank < 15)
    throw std::invalid_argument(
        "characterize_ms: selected system rank " + std::to_string(rank) +
        " < 15 (condition number " + std::to_string(smax / std::max(smin, 1e-300)) + ")");
  Eigen::VectorXd d_free = svd.solve(b);

  Eigen::VectorXd diag(16);
  diag[0] = 1.0;
  diag.tail(15) = d_free;
  Eigen::VectorXd rates = rates_from_diagonal(diag, 2);

  // Propagated binomial std per rate: rows are whitened, so cov(d) is
  // (A^T A)^-1 and the rates are S d / 16.
  Eigen::MatrixXd cov_d = (a.transpose() * a).inverse();
  double sigma_max = 0.0;
  for (int j = 0; j < 16; ++j) {
    double var = 0.0;
    for (int l = 1; l < 16; ++l)
      for (int l2 = 1; l2 < 16; ++l2)
        var += commute_sign(j, l, 2) * commute_sign(j, l2, 2) * cov_d(l - 1, l2 - 1) / 256.0;
    sigma_max = std::max(sigma_max, std::sqrt(std::max(var, 0.0)));
  }

  // A genuinely non-Pauli device shows up as negativity far beyond the
  // statistical resolution of the solve.
  double guard = std::max(1e-4, 5.0 * sigma_max);
  double min_rate = rates.minCoeff();
  if (min_rate < -guard)
    throw std::invalid_argument("characterize_ms: negative rate " + std::to_string(min_rate) +
                                " beyond " + std::to_string(guard) +
                                " violates the Pauli-error model");
  return PauliChannel(2, project_to_simplex(rates));
}

Ptm derive_ms_zz(const GstEstimate& singles, const Ptm& ms_yy) {
  Ptm pre = estimated_ptm(singles, GateLabel("X90:X90"));
  Ptm post = estimated_ptm(singles, GateLabel("X-90:X-90"));
  return compose(post, compose(ms_yy, pre));
}

Ptm estimated_ptm(const GstEstimate& est, const GateLabel& g) {
  if (est.n == 1) {
    if (is_noop(g)) return Ptm::identity(1);
    if (!is_single_qubit_gate(g))
      throw std::invalid_argument("estimated_ptm: '" + g.name + "' needs two qubits");
    return compose(channel_ptm(est.gate_rates.at(g.name)), ideal_ptm(g));
  }
  if (g.name == "MS_YY")
    return compose(channel_ptm(est.gate_rates.at("MS_YY")), ideal_ptm(g));
  if (g.name == "MS_ZZ")
    return derive_ms_zz(est, estimated_ptm(est, GateLabel("MS_YY")));
  if (is_pair_gate(g)) {
    auto [a, b] = split_pair(g);
    Ptm pa = is_noop(a) ? Ptm::identity(1)
                        : compose(channel_ptm(est.gate_rates.at(a.name + "@0")), ideal_ptm(a));
    Ptm pb = is_noop(b) ? Ptm::identity(1)
                        : compose(channel_ptm(est.gate_rates.at(b.name + "@1")), ideal_ptm(b));
    return tensor(pa, pb);
  }
  throw std::invalid_argument("estimated_ptm: unknown gate '" + g.name + "'");
}

PauliVector estimated_prep(const GstEstimate& est) {
  if (est.n == 1) return state_from_bloch(est.state_params.at(0));
  return tensor(state_from_bloch(est.state_params.at(0)),
                state_from_bloch(est.state_params.at(1)));
}

std::vector<PauliVector> estimated_basis_states(const GstEstimate& est) {
  std::vector<PauliVector> states;
  PauliVector rho0 = estimated_prep(est);
  if (est.n == 1) {
    for (const GateLabel& f : fiducials_1q())
      states.emplace_back(1, estimated_ptm(est, f).m * rho0.v);
  } else {
    for (int i = 0; i < 16; ++i)
      states.emplace_back(2, estimated_ptm(est, prep_pair_label(i)).m * rho0.v);
  }
  return states;
}

std::optional<GateLabel> prep_fiducial_op(int n, int i) {
  if (i < 0 || i >= pauli_dim(n)) throw std::invalid_argument("prep_fiducial_op: bad index");
  if (i == 0) return std::nullopt;
  if (n == 1) return fiducials_1q()[i];
  return prep_pair_label(i);
}

GateLabel pauli_op_label(int n, int b) {
  if (b < 0 || b >= pauli_dim(n)) throw std::invalid_argument("pauli_op_label: bad index");
  if (n == 1) return pauli_ops_1q()[b];
  return make_pair(pauli_ops_1q()[b / 4], pauli_ops_1q()[b % 4]);
}

std::vector<Ptm> estimated_pauli_basis(const GstEstimate& est) {
  std::vector<Ptm> basis;
  if (est.n == 1) {
    for (const GateLabel& p : pauli_ops_1q()) basis.push_back(estimated_ptm(est, p));
  } else {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        basis.push_back(estimated_ptm(est, make_pair(pauli_ops_1q()[a], pauli_ops_1q()[b])));
  }
  return basis;
}

}  // namespace peclab
