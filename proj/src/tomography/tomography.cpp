// Copyright 2026 The thz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "thz/tomography.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "detail/pool.hpp"
#include "thz/errors.hpp"
#include "thz/lindblad.hpp"
#include "thz/observables.hpp"

namespace thz {

namespace {

const cplx kI(0.0, 1.0);

CMat hadamard() {
  CMat h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

// S = diag(1, i) in the (e, g) ordering
CMat phase_adjoint() {
  CMat s = CMat::Zero(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = -kI;
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const char kAxisName[3] = {'X', 'Y', 'Z'};

}  // namespace

CMat setting_rotation(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::X:
      return hadamard();
    case PauliAxis::Y:
      return hadamard() * phase_adjoint();  // S^dag first, then H
    case PauliAxis::Z:
      break;
  }
  return CMat::Identity(2, 2);
}

std::string MeasurementSetting::label() const {
  return std::string{kAxisName[static_cast<int>(axes[0])], kAxisName[static_cast<int>(axes[1])]};
}

std::vector<MeasurementSetting> settings() {
  std::vector<MeasurementSetting> out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      MeasurementSetting s;
      s.axes = {static_cast<PauliAxis>(a), static_cast<PauliAxis>(b)};
      s.rotation = {setting_rotation(s.axes[0]), setting_rotation(s.axes[1])};
      s.index = 3 * a + b;
      out.push_back(s);
    }
  return out;
}

PulseParams PulseParams::fast_preset(double gamma) {
  PulseParams p;
  p.gamma = gamma;
  p.duration = 1.0 / (10.0 * kTwoPi * gamma);
  p.omega_u = 5.0 * std::numbers::pi * gamma;
  return p;
}

PulseParams PulseParams::slow_preset(double gamma) {
  PulseParams p;
  p.gamma = gamma;
  p.omega_u = gamma;
  p.duration = 1.0 / (4.0 * gamma);
  return p;
}

CMat pulse_hamiltonian(PauliAxis axis, double omega_u) {
  const CMat sx = ops::pauli_x().mat(), sy = ops::pauli_y().mat(), sz = ops::pauli_z().mat();
  switch (axis) {
    case PauliAxis::X:
      return -omega_u * (sx + sz) / std::sqrt(2.0);
    case PauliAxis::Y:
      // generator of H S^dag: a 2 pi / 3 turn about (1, 1, 1)
      return (2.0 / 3.0) * omega_u * (sx + sy + sz) / std::sqrt(3.0);
    case PauliAxis::Z:
      break;
  }
  return CMat::Zero(2, 2);
}

QMatrix apply_rotation(const QMatrix& rho, const MeasurementSetting& s, const RotationMode& mode) {
  if (rho.dims() != std::vector<int>{2, 2}) throw InvalidArgument("apply_rotation: expects a two-qubit state");
  require_density(rho);
  if (!mode.pulsed) {
    CMat u = kron(QMatrix(s.rotation[0]), QMatrix(s.rotation[1])).mat();
    return QMatrix(u * rho.mat() * u.adjoint(), {2, 2});
  }
  const PulseParams& p = mode.pulse;
  if (!(p.omega_u > 0.0)) throw InvalidArgument("apply_rotation: pulsed mode needs Omega_U > 0");
  if (!(p.duration >= 0.0) || !(p.gamma >= 0.0)) throw InvalidArgument("apply_rotation: bad pulse parameters");
  LindbladModel m;
  m.hamiltonian = kron(QMatrix(pulse_hamiltonian(s.axes[0], p.omega_u)), ops::eye(2)) +
                  kron(ops::eye(2), QMatrix(pulse_hamiltonian(s.axes[1], p.omega_u)));
  m.jumps.push_back({kron(ops::lowering(), ops::eye(2)), p.gamma, "sigma1"});
  m.jumps.push_back({kron(ops::eye(2), ops::lowering()), p.gamma, "sigma2"});
  Superoperator L = liouvillian(m);
  CMat prop = (L.data * p.duration).exp();
  return unvec(prop * vec(rho), {2, 2});
}

void DetectorModel::validate() const {
  if (!(eta_e >= 0.0 && eta_e <= 1.0 && eta_g >= 0.0 && eta_g <= 1.0))
    throw InvalidArgument("DetectorModel: efficiencies must lie in [0, 1]");
}

Eigen::Matrix2d DetectorModel::confusion() const {
  Eigen::Matrix2d c;
  c << eta_e, 1.0 - eta_g, 1.0 - eta_e, eta_g;
  return c;
}

Probabilities outcome_probabilities(const QMatrix& rho) {
  if (rho.dims() != std::vector<int>{2, 2}) throw InvalidArgument("outcome_probabilities: expects a two-qubit state");
  Probabilities p{};
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    p[k] = std::max(0.0, rho.mat()(k, k).real());
    sum += p[k];
  }
  for (double& x : p) x /= sum;
  return p;
}

namespace {

std::vector<double> apply_per_emitter(const std::vector<double>& p, const Eigen::Matrix2d& m, const char* who) {
  if (p.size() == 2) {
    Eigen::Vector2d v = m * Eigen::Vector2d(p[0], p[1]);
    return {v(0), v(1)};
  }
  if (p.size() == 4) {
    Eigen::Matrix4d big;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) big.block<2, 2>(2 * a, 2 * b) = m(a, b) * m;
    Eigen::Vector4d v = big * Eigen::Vector4d(p[0], p[1], p[2], p[3]);
    return {v(0), v(1), v(2), v(3)};
  }
  throw InvalidArgument(std::string(who) + ": expects 2 or 4 outcome probabilities");
}

}  // namespace

std::vector<double> confuse(const std::vector<double>& p, const DetectorModel& d) {
  d.validate();
  return apply_per_emitter(p, d.confusion(), "confuse");
}

std::vector<double> mitigate(const std::vector<double>& p, const DetectorModel& d) {
  d.validate();
  if (d.singular())
    throw SingularDetectorError("mitigate: confusion matrix is singular at eta_e = 1 - eta_g (det = " +
                                std::to_string(d.determinant()) + ")");
  Eigen::Matrix2d inv;
  const double det = d.determinant();
  inv << d.eta_g, -(1.0 - d.eta_g), -(1.0 - d.eta_e), d.eta_e;
  inv /= det;
  return apply_per_emitter(p, inv, "mitigate");
}

Counts sample_shots(const QMatrix& rho, const MeasurementSetting& s, std::uint64_t n_shot, const DetectorModel& d,
                    std::uint64_t seed, const RotationMode& mode) {
  Counts counts{};
  if (n_shot == 0) return counts;
  Probabilities born = outcome_probabilities(apply_rotation(rho, s, mode));
  std::vector<double> meas = confuse({born.begin(), born.end()}, d);
  std::mt19937_64 rng(splitmix64(seed));
  // multinomial as a chain of conditional binomials
  std::uint64_t left = n_shot;
  double rest = 1.0;
  for (int k = 0; k < 3 && left > 0; ++k) {
    double pk = std::max(0.0, meas[k]);
    double q = rest > 0.0 ? std::min(1.0, pk / rest) : 0.0;
    std::binomial_distribution<std::uint64_t> bin(left, q);
    counts[k] = bin(rng);
    left -= counts[k];
    rest -= pk;
  }
  counts[3] = left;
  return counts;
}

QMatrix linear_inversion(const std::vector<Probabilities>& probs) {
  std::vector<MeasurementSetting> st = settings();
  if (probs.size() != st.size())
    throw InvalidArgument("linear_inversion: need probabilities for all " + std::to_string(st.size()) + " settings");
  const CMat id = CMat::Identity(2, 2);
  CMat rho = CMat::Zero(4, 4);
  for (std::size_t u = 0; u < st.size(); ++u) {
    std::array<std::array<CMat, 2>, 2> eff;  // [emitter][outcome]
    for (int i = 0; i < 2; ++i)
      for (int b = 0; b < 2; ++b) {
        const CMat& U = st[u].rotation[i];
        CMat proj = CMat::Zero(2, 2);
        proj(b, b) = 1.0;
        eff[i][b] = 3.0 * U.adjoint() * proj * U - id;
      }
    for (int b1 = 0; b1 < 2; ++b1)
      for (int b2 = 0; b2 < 2; ++b2)
        rho += probs[u][2 * b1 + b2] * kron(QMatrix(eff[0][b1]), QMatrix(eff[1][b2])).mat();
  }
  rho /= static_cast<double>(st.size());
  return QMatrix(rho, {2, 2});
}

QMatrix project_physical(const QMatrix& rho_bar) {
  if (rho_bar.hermiticity_error() > 1e-8) throw InvalidArgument("project_physical: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho_bar.mat() + rho_bar.mat().adjoint()));
  RVec ev = es.eigenvalues().cwiseMax(0.0);
  double tr = ev.sum();
  if (!(tr > 0.0)) throw NumericError("project_physical: no positive eigenvalue");
  CMat v = es.eigenvectors();
  CMat out = v * (ev / tr).cast<cplx>().asDiagonal() * v.adjoint();
  return QMatrix(0.5 * (out + out.adjoint()), rho_bar.dims());
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return splitmix64(h ^ c);
}

TomographyRecord run_tomography(const QMatrix& prepared, const QMatrix& reference, std::uint64_t n_shot,
                                const DetectorModel& d, std::uint64_t seed, const TomographyOptions& opt) {
  if (n_shot == 0) throw InvalidArgument("run_tomography: n_shot must be positive");
  TomographyRecord rec;
  rec.n_shot = n_shot;
  rec.seed = seed;
  rec.detector = d;
  rec.singular = d.singular();
  DetectorModel inv = d;
  if (rec.singular) inv.eta_e = std::max(0.0, d.eta_e - opt.singular_offset);
  for (const MeasurementSetting& s : settings()) {
    Counts c = sample_shots(prepared, s, n_shot, d, derive_seed(seed, static_cast<std::uint64_t>(s.index)),
                            opt.rotation);
    rec.counts.push_back(c);
    std::vector<double> f(4);
    for (int k = 0; k < 4; ++k) f[k] = static_cast<double>(c[k]) / static_cast<double>(n_shot);
    std::vector<double> m = mitigate(f, inv);
    rec.mitigated.push_back({m[0], m[1], m[2], m[3]});
  }
  rec.rho_bar = linear_inversion(rec.mitigated);
  rec.rho_phys = project_physical(rec.rho_bar);
  rec.fidelity = fidelity(rec.rho_phys, reference);
  return rec;
}

std::vector<FidelityCell> fidelity_study(const FidelityStudyRequest& req) {
  require_density(req.prepared);
  const QMatrix& ref = req.reference ? *req.reference : req.prepared;
  if (req.n_ave < 1) throw InvalidArgument("fidelity_study: n_ave must be positive");
  const std::size_t ne = req.eta_e.size();
  std::vector<FidelityCell> cells(req.n_shot.size() * ne);
  detail::parallel_for(cells.size(), req.threads, [&](std::size_t k) {
    FidelityCell& c = cells[k];
    c.n_shot = req.n_shot[k / ne];
    c.eta_e = req.eta_e[k % ne];
    DetectorModel d{c.eta_e, req.eta_g};
    c.singular = d.singular();
    for (int r = 0; r < req.n_ave; ++r) {
      TomographyRecord rec =
          run_tomography(req.prepared, ref, c.n_shot, d, derive_seed(req.seed, k, static_cast<std::uint64_t>(r)),
                         req.options);
      c.fidelities.push_back(rec.fidelity);
    }
    double sum = 0.0, sq = 0.0;
    for (double f : c.fidelities) sum += f;
    c.mean = sum / req.n_ave;
    for (double f : c.fidelities) sq += (f - c.mean) * (f - c.mean);
    c.stddev = req.n_ave > 1 ? std::sqrt(sq / (req.n_ave - 1)) : 0.0;
  });
  return cells;
}

WallClock wall_clock_estimate(double n_shot, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("wall_clock_estimate: gamma must be positive");
  if (n_shot < 0.0) throw InvalidArgument("wall_clock_estimate: negative n_shot");
  WallClock w;
  w.per_setting = 10.0 * n_shot / (kTwoPi * gamma * 1e9);
  w.total = 9.0 * w.per_setting;
  return w;
}

}  // namespace thz
