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

#include "thz/errors.hpp"
#include "thz/models.hpp"

namespace thz {

void SystemParams::validate() const {
  auto nonneg = [](double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw InvalidArgument(std::string("SystemParams: ") + name + " must be finite and >= 0");
  };
  nonneg(f_thz, "f_thz");
  nonneg(kappa, "kappa");
  for (int i = 0; i < 2; ++i) {
    nonneg(omega[i], "omega");
    nonneg(omega_sb[i], "omega_sb");
    nonneg(chi[i], "chi");
    nonneg(gamma[i], "gamma");
    if (!std::isfinite(delta[i])) throw InvalidArgument("SystemParams: delta must be finite");
  }
  if (n_fock < 2) throw InvalidArgument("SystemParams: n_fock must be >= 2");
  if (!(f_thz > 0.0)) throw InvalidArgument("SystemParams: f_thz must be > 0");
}

DressedFrame dressed_frame(const SystemParams& p) {
  p.validate();
  DressedFrame d;
  for (int i = 0; i < 2; ++i) {
    if (p.omega[i] == 0.0 && p.delta[i] == 0.0)
      throw InvalidArgument("dressed_frame: emitter " + std::to_string(i + 1) + " has Omega = Delta = 0");
    d.omega_r[i] = std::hypot(p.delta[i], p.omega[i]);
    // tan(theta) = (Omega_R - Delta) / Omega, written without the 0/0 at Omega = 0
    d.theta[i] = 0.5 * std::atan2(p.omega[i], p.delta[i]);
    d.c[i] = std::cos(d.theta[i]);
    d.s[i] = std::sin(d.theta[i]);
  }
  const double chisum = p.chi[0] + p.chi[1];
  for (int i = 0; i < 2; ++i) {
    double cos2 = d.c[i] * d.c[i] - d.s[i] * d.s[i];
    d.lamb[i] = 4.0 * p.chi[i] * chisum * cos2 / p.f_thz;
    d.delta_r[i] = d.omega_r[i] - p.f_thz - d.lamb[i];
    d.g[i] = -2.0 * p.chi[i] * d.c[i] * d.s[i];
  }
  d.J = 2.0 * p.chi[0] * p.chi[1] * (d.c[0] * d.c[0] - d.s[0] * d.s[0]) * (d.c[1] * d.c[1] - d.s[1] * d.s[1]) /
        p.f_thz;
  return d;
}

DoublyDressedFrame doubly_dressed_frame(const SystemParams& p, const DressedFrame& d) {
  DoublyDressedFrame dd;
  for (int i = 0; i < 2; ++i) {
    double drive = d.c[i] * d.c[i] * p.omega_sb[i];
    if (drive == 0.0 && d.delta_r[i] == 0.0)
      throw InvalidArgument("doubly_dressed_frame: emitter " + std::to_string(i + 1) +
                            " has zero sideband drive and zero detuning");
    dd.omega_r[i] = std::hypot(d.delta_r[i], drive);
    dd.theta[i] = 0.5 * std::atan2(drive, d.delta_r[i]);
    dd.c[i] = std::cos(dd.theta[i]);
    dd.s[i] = std::sin(dd.theta[i]);
    double gcs = 2.0 * d.c[i] * d.s[i] * p.chi[i];
    if (p.kappa > 0.0)
      dd.purcell[i] = 4.0 * gcs * gcs / p.kappa;
    else if (gcs == 0.0)
      dd.purcell[i] = 0.0;
    else
      throw InvalidArgument("doubly_dressed_frame: kappa = 0 gives an unbounded Purcell rate");
  }
  return dd;
}

QMatrix rotation(double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  CMat r(2, 2);
  r << c, -s, s, c;
  return QMatrix(r, {2});
}

QMatrix to_rotated(const QMatrix& op, double theta) {
  CMat r = rotation(theta).mat();
  return QMatrix(r.transpose() * op.mat() * r, op.dims());
}

QMatrix sigma_in_dressed(double theta) { return to_rotated(ops::lowering(), theta); }

CMat dressed_to_bare(const DressedFrame& d, int n_fock) {
  QMatrix w = kron(rotation(d.theta[0]), rotation(d.theta[1]));
  if (n_fock > 1) w = kron(w, ops::eye(n_fock));
  return w.mat();
}

CMat doubly_dressed_to_bare(const DressedFrame& d, const DoublyDressedFrame& dd) {
  QMatrix inner = kron(rotation(dd.theta[0]), rotation(dd.theta[1]));
  return dressed_to_bare(d, 1) * inner.mat();
}

}  // namespace thz
