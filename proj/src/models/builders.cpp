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

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "thz/errors.hpp"
#include "thz/models.hpp"

namespace thz {

namespace {

constexpr double kGrwaRatio = 0.1;

QMatrix at(const QMatrix& op, int i, const std::vector<int>& dims) { return embed(op, i, dims); }

// Product of the two rotated xi_z operators, (cos2t zx - sin2t xx) per emitter.
QMatrix rotated_zz(const std::array<double, 2>& theta) {
  QMatrix z1 = to_rotated(ops::pauli_z(), theta[0]);
  QMatrix z2 = to_rotated(ops::pauli_z(), theta[1]);
  return kron(z1, z2);
}

}  // namespace

QMatrix build_xplus(const QMatrix& h_static, const QMatrix& a, double f_thz) {
  if (!h_static.same_space(a)) throw InvalidArgument("build_xplus: operands live on different spaces");
  if (!(f_thz > 0.0)) throw InvalidArgument("build_xplus: f_thz must be > 0");
  double scale = std::max(1.0, h_static.mat().cwiseAbs().maxCoeff());
  if (h_static.hermiticity_error() > 1e-10 * scale) throw InvalidArgument("build_xplus: Hamiltonian not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (h_static.mat() + h_static.mat().adjoint()));
  if (es.info() != Eigen::Success) throw NumericError("build_xplus: eigensolver failed");
  const auto& w = es.eigenvalues();
  const CMat& V = es.eigenvectors();
  CMat x = V.adjoint() * (a.mat() + a.mat().adjoint()) * V;
  const Eigen::Index n = w.size();
  CMat xp = CMat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      double wkj = w(k) - w(j);
      if (wkj < 1e-9) continue;
      xp(j, k) = std::sqrt(wkj / f_thz) * x(j, k);
    }
  return QMatrix(V * xp * V.adjoint(), h_static.dims());
}

QMatrix full_static_hamiltonian(const SystemParams& p) {
  p.validate();
  const std::vector<int> dims{2, 2, p.n_fock};
  QMatrix a = at(ops::destroy(p.n_fock), 2, dims);
  QMatrix x = a + a.adjoint();
  QMatrix h = p.f_thz * (a.adjoint() * a);
  QMatrix id = QMatrix::identity(dims);
  for (int i = 0; i < 2; ++i) {
    QMatrix sz = at(ops::pauli_z(), i, dims);
    h += (0.5 * p.delta[i]) * sz;
    h += (0.5 * p.omega[i]) * at(ops::pauli_x(), i, dims);
    h += p.chi[i] * ((id + sz) * x);
  }
  return h;
}

LindbladModel build_full_model(const SystemParams& p) {
  LindbladModel m;
  m.hamiltonian = full_static_hamiltonian(p);
  const std::vector<int>& dims = m.hamiltonian.dims();
  QMatrix amp = QMatrix::zero(dims);
  for (int i = 0; i < 2; ++i) amp += (0.5 * p.omega_sb[i]) * at(ops::lowering(), i, dims);
  m.periodic = PeriodicTerm{amp, p.f_thz};
  for (int i = 0; i < 2; ++i)
    m.jumps.push_back({at(ops::lowering(), i, dims), p.gamma[i], fmt::format("sigma{}", i + 1)});
  QMatrix a = at(ops::destroy(p.n_fock), 2, dims);
  m.jumps.push_back({build_xplus(m.hamiltonian, a, p.f_thz), p.kappa, "xplus"});
  return m;
}

QMatrix grwa_frame_generator(const SystemParams& p) {
  DressedFrame d = dressed_frame(p);
  const std::vector<int> dims{2, 2, p.n_fock};
  QMatrix g = at(ops::number(p.n_fock), 2, dims);
  for (int i = 0; i < 2; ++i) {
    CMat r = rotation(d.theta[i]).mat();
    QMatrix xz(r * ops::pauli_z().mat() * r.transpose(), {2});
    g += 0.5 * at(xz, i, dims);
  }
  return p.f_thz * g;
}

QMatrix grwa_qubit_hamiltonian(const SystemParams& p, const DressedFrame& d) {
  const std::vector<int> dims{2, 2};
  QMatrix h = QMatrix::zero(dims);
  for (int i = 0; i < 2; ++i) {
    h += (0.5 * d.delta_r[i]) * at(ops::pauli_z(), i, dims);
    h += (0.5 * d.c[i] * d.c[i] * p.omega_sb[i]) * at(ops::pauli_x(), i, dims);
  }
  h -= d.J * kron(ops::pauli_z(), ops::pauli_z());
  return h;
}

LindbladModel build_grwa_model(const SystemParams& p) {
  DressedFrame d = dressed_frame(p);
  const std::vector<int> dims{2, 2, p.n_fock};
  LindbladModel m;
  QMatrix a = at(ops::destroy(p.n_fock), 2, dims);
  QMatrix h0 = QMatrix::zero(dims);
  QMatrix sb = QMatrix::zero(dims);
  QMatrix excitations = a.adjoint() * a;
  QMatrix id = QMatrix::identity(dims);
  for (int i = 0; i < 2; ++i) {
    QMatrix xi = at(ops::lowering(), i, dims);
    QMatrix xz = at(ops::pauli_z(), i, dims);
    h0 += (0.5 * d.delta_r[i]) * xz;
    h0 += d.g[i] * (a.adjoint() * xi + a * xi.adjoint());
    sb += (0.5 * d.c[i] * d.c[i] * p.omega_sb[i]) * at(ops::pauli_x(), i, dims);
    excitations += 0.5 * (xz + id);
  }
  h0 -= d.J * (at(ops::pauli_z(), 0, dims) * at(ops::pauli_z(), 1, dims));
  m.hamiltonian = h0 + sb;

  for (int i = 0; i < 2; ++i)
    m.jumps.push_back({at(sigma_in_dressed(d.theta[i]), i, dims), p.gamma[i], fmt::format("sigma{}", i + 1)});
  // Transition frequencies for X+ are the lab-frame ones: restore f_thz N.
  QMatrix h_lab = h0 + p.f_thz * excitations;
  m.jumps.push_back({build_xplus(h_lab, a, p.f_thz), p.kappa, "xplus"});

  for (int i = 0; i < 2; ++i) {
    if (p.chi[i] / p.f_thz > kGrwaRatio)
      m.warnings.push_back(fmt::format("GRWA validity: chi{}/f_thz = {:.3g} > {}", i + 1, p.chi[i] / p.f_thz, kGrwaRatio));
    if (p.omega_sb[i] / p.f_thz > kGrwaRatio)
      m.warnings.push_back(
          fmt::format("GRWA validity: omega_sb{}/f_thz = {:.3g} > {}", i + 1, p.omega_sb[i] / p.f_thz, kGrwaRatio));
  }
  return m;
}

LindbladModel build_adiabatic_model(const SystemParams& p) {
  DressedFrame d = dressed_frame(p);
  DoublyDressedFrame dd = doubly_dressed_frame(p, d);
  const std::vector<int> dims{2, 2};
  LindbladModel m;
  m.hamiltonian = grwa_qubit_hamiltonian(p, d);
  QMatrix l = std::sqrt(dd.purcell[0]) * at(ops::lowering(), 0, dims) +
              std::sqrt(dd.purcell[1]) * at(ops::lowering(), 1, dims);
  m.jumps.push_back({l, 1.0, "collective"});
  for (int i = 0; i < 2; ++i)
    m.jumps.push_back({at(sigma_in_dressed(d.theta[i]), i, dims), p.gamma[i], fmt::format("sigma{}", i + 1)});
  for (int i = 0; i < 2; ++i) {
    double g = 2.0 * d.c[i] * d.s[i] * p.chi[i];
    if (p.kappa < g)
      m.warnings.push_back(fmt::format("bad-cavity validity: kappa < 2 c{0} s{0} chi{0} = {1:.4g}", i + 1, g));
    if (p.kappa < std::abs(d.delta_r[i]))
      m.warnings.push_back(fmt::format("bad-cavity validity: kappa < |Delta_R{}| = {:.4g}", i + 1, std::abs(d.delta_r[i])));
  }
  return m;
}

LindbladModel build_doubly_dressed_model(const DoublyDressedFrame& dd, double J, bool crossed_lplus) {
  const std::vector<int> dims{2, 2};
  LindbladModel m;
  QMatrix h = QMatrix::zero(dims);
  for (int i = 0; i < 2; ++i) h += (0.5 * dd.omega_r[i]) * at(ops::pauli_z(), i, dims);
  h -= J * rotated_zz(dd.theta);
  m.hamiltonian = h;

  std::array<double, 2> sg{std::sqrt(dd.purcell[0]), std::sqrt(dd.purcell[1])};
  QMatrix t1 = at(ops::lowering(), 0, dims), t2 = at(ops::lowering(), 1, dims);
  double c1 = dd.c[0] * dd.c[0], c2 = dd.c[1] * dd.c[1];
  double s1 = dd.s[0] * dd.s[0], s2 = dd.s[1] * dd.s[1];
  QMatrix lplus = crossed_lplus ? (sg[0] * c1) * t2 + (sg[1] * c2) * t1 : (sg[0] * c1) * t1 + (sg[1] * c2) * t2;
  QMatrix lminus = (-sg[0] * s1) * t1.adjoint() + (-sg[1] * s2) * t2.adjoint();
  QMatrix lz = (sg[0] * dd.c[0] * dd.s[0]) * at(ops::pauli_z(), 0, dims) +
               (sg[1] * dd.c[1] * dd.s[1]) * at(ops::pauli_z(), 1, dims);
  m.jumps.push_back({lplus, 1.0, "lplus"});
  m.jumps.push_back({lminus, 1.0, "lminus"});
  m.jumps.push_back({lz, 1.0, "lz"});
  for (int i = 0; i < 2; ++i)
    if (dd.omega_r[i] < 5.0 * dd.purcell[i])
      m.warnings.push_back(fmt::format("strong-driving validity: Omega~_R{0} < 5 Gamma{0}", i + 1));
  return m;
}

DoublyDressedFrame symmetric_doubly_dressed_frame(double purcell, double theta_tilde, double omega_r_tilde) {
  DoublyDressedFrame dd;
  dd.theta = {theta_tilde, M_PI / 2 - theta_tilde};
  for (int i = 0; i < 2; ++i) {
    dd.c[i] = std::cos(dd.theta[i]);
    dd.s[i] = std::sin(dd.theta[i]);
    dd.omega_r[i] = omega_r_tilde;
    dd.purcell[i] = purcell;
  }
  return dd;
}

LindbladModel build_doubly_dressed_model(const SystemParams& p, const DoublyDressedOptions& opt) {
  DressedFrame d = dressed_frame(p);
  DoublyDressedFrame dd = doubly_dressed_frame(p, d);
  LindbladModel m = build_doubly_dressed_model(dd, d.J, opt.crossed_lplus);
  const std::vector<int> dims{2, 2};
  if (opt.emitter_decay)
    for (int i = 0; i < 2; ++i)
      m.jumps.push_back({at(to_rotated(sigma_in_dressed(d.theta[i]), dd.theta[i]), i, dims), p.gamma[i],
                         fmt::format("sigma{}", i + 1)});
  return m;
}

}  // namespace thz
