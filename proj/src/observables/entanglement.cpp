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

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "thz/errors.hpp"
#include "thz/observables.hpp"

namespace thz {

namespace {

CMat psd_sqrt(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (h + h.adjoint()));
  RVec s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

void require_two_qubit(const QMatrix& rho, const char* who) {
  if (rho.size() != 4) throw InvalidArgument(std::string(who) + ": expected a 4x4 two-qubit matrix");
}

}  // namespace

double concurrence(const QMatrix& rho) {
  require_two_qubit(rho, "concurrence");
  require_density(rho);
  // rho = W W^dag; the Wootters lambdas are the singular values of W^T Y W
  // (Y = sy x sy), which avoids square roots of rho's near-zero eigenvalues.
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho.mat() + rho.mat().adjoint()));
  const RVec& ev = es.eigenvalues();
  const double cut = 1e-14 * std::max(ev.maxCoeff(), 1e-300);
  CMat w = CMat::Zero(4, 4);
  for (int k = 0; k < 4; ++k)
    if (ev(k) > cut) w.col(k) = std::sqrt(ev(k)) * es.eigenvectors().col(k);
  CMat yy = kron(ops::pauli_y(), ops::pauli_y()).mat();
  CMat tau = w.transpose() * yy * w;
  Eigen::JacobiSVD<CMat> svd(tau);
  RVec l = svd.singularValues();  // descending
  return std::clamp(l(0) - l(1) - l(2) - l(3), 0.0, 1.0);
}

double fidelity(const QMatrix& rho, const QMatrix& sigma) {
  if (rho.size() != sigma.size()) throw InvalidArgument("fidelity: size mismatch");
  CMat sq = psd_sqrt(rho.mat());
  CMat inner = sq * sigma.mat() * sq;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  double t = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(t * t, 0.0, 1.0);
}

double g2_cross(const QMatrix& rho) {
  require_two_qubit(rho, "g2_cross");
  const std::vector<int> dims{2, 2};
  CMat s1 = embed(ops::lowering(), 0, dims).mat();
  CMat s2 = embed(ops::lowering(), 1, dims).mat();
  CMat r = rho.mat();
  double n1 = (r * s1.adjoint() * s1).trace().real();
  double n2 = (r * s2.adjoint() * s2).trace().real();
  if (n1 <= 1e-12 || n2 <= 1e-12) throw NumericError("g2_cross: vanishing emitter population");
  double num = (r * s1.adjoint() * s2.adjoint() * s1 * s2).trace().real();
  return std::max(num, 0.0) / (n1 * n2);
}

DarkState dark_state(const DressedFrame& d, const DoublyDressedFrame& dd) {
  double a = std::sqrt(dd.purcell[0]) * dd.c[0] * dd.c[0];
  double b = std::sqrt(dd.purcell[1]) * dd.c[1] * dd.c[1];
  // Without Purcell rates the state is defined by the angles alone.
  if (dd.purcell[0] == 0.0 && dd.purcell[1] == 0.0) {
    a = dd.c[0] * dd.c[0];
    b = dd.c[1] * dd.c[1];
  }
  double nrm = std::hypot(a, b);
  if (nrm == 0.0) throw InvalidArgument("dark_state: degenerate (c~1 = c~2 = 0)");
  DarkState ds;
  ds.doubly_dressed = CVec::Zero(4);
  ds.doubly_dressed(2) = a / nrm;   // |-+>
  ds.doubly_dressed(1) = -b / nrm;  // |+->
  ds.bare = doubly_dressed_to_bare(d, dd) * ds.doubly_dressed;
  return ds;
}

QMatrix grwa_emitter_state(const QMatrix& rho_grwa, const DressedFrame& d) {
  QMatrix q = rho_grwa.dims().size() == 3 ? partial_trace(rho_grwa, {0, 1}) : rho_grwa;
  CMat w = dressed_to_bare(d, 1);
  return normalize_density(QMatrix(w * q.mat() * w.adjoint(), {2, 2}));
}

SteadyReport steady_report(const SystemParams& p, ModelLevel level, const ReportOptions& opt) {
  DressedFrame d = dressed_frame(p);
  SteadyReport rep;
  LindbladModel m;
  switch (level) {
    case ModelLevel::Grwa:
      m = build_grwa_model(p);
      break;
    case ModelLevel::Adiabatic:
      m = build_adiabatic_model(p);
      break;
    case ModelLevel::DoublyDressed:
      m = build_doubly_dressed_model(p, {opt.crossed_lplus, true});
      break;
  }
  rep.warnings = m.warnings;
  Superoperator L = liouvillian(m);
  QMatrix rho = steady_state(L);
  if (level == ModelLevel::DoublyDressed) {
    DoublyDressedFrame dd = doubly_dressed_frame(p, d);
    CMat w = doubly_dressed_to_bare(d, dd);
    rep.rho = normalize_density(QMatrix(w * rho.mat() * w.adjoint(), {2, 2}));
  } else {
    rep.rho = grwa_emitter_state(rho, d);
  }
  rep.concurrence = concurrence(rep.rho);
  try {
    rep.g2_cross = g2_cross(rep.rho);
  } catch (const NumericError&) {
    rep.g2_cross = std::numeric_limits<double>::quiet_NaN();
  }
  rep.gap = opt.compute_gap ? gap_numeric(L) : std::numeric_limits<double>::quiet_NaN();
  if (p.kappa > 0.0) {
    DoublyDressedFrame dd = doubly_dressed_frame(p, d);
    DarkState ds = dark_state(d, dd);
    rep.dark_overlap = std::clamp((ds.bare.adjoint() * rep.rho.mat() * ds.bare)(0, 0).real(), 0.0, 1.0);
  }
  return rep;
}

}  // namespace thz
