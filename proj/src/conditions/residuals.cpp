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
#include <limits>

#include "thz/conditions.hpp"
#include "thz/errors.hpp"

namespace thz {

double epsilon_correction(const DressedFrame& d, const DoublyDressedFrame& dd) {
  if (d.J == 0.0) return 0.0;
  double a = std::sqrt(dd.purcell[0]) * dd.c[0] * dd.c[0];
  double b = std::sqrt(dd.purcell[1]) * dd.c[1] * dd.c[1];
  double s = std::sin(2.0 * dd.theta[0]) * std::sin(2.0 * dd.theta[1]);
  if (a == 0.0 || b == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return d.J * s * (a / b - b / a);
}

AppBSolution appb_eigen_system(const DoublyDressedFrame& dd, double J) {
  AppBSolution out;
  double coupling = 0.0;
  double r = 1.0;
  if (J != 0.0) {
    coupling = J * std::sin(2.0 * dd.theta[0]) * std::sin(2.0 * dd.theta[1]);
    r = std::sqrt(dd.purcell[0]) * dd.c[0] * dd.c[0] / (std::sqrt(dd.purcell[1]) * dd.c[1] * dd.c[1]);
  }
  double half = 0.5 * (dd.omega_r[1] - dd.omega_r[0]);
  out.energies[0] = half - coupling * r;
  out.energies[1] = -half - coupling / r;
  out.E = 0.5 * (out.energies[0] + out.energies[1]);
  out.residual = out.energies[0] - out.energies[1];
  return out;
}

ConditionReport condition_residuals(const SystemParams& p, double tol_rel) {
  ConditionReport r;
  const double f = p.f_thz;
  r.tol_frequency = tol_rel * f;
  if (p.delta[0] == 0.0 || p.delta[1] == 0.0) {
    r.cross_product_form = true;
    r.residual0 = p.omega[0] * p.delta[1] - p.omega[1] * p.delta[0];
    r.tol_ratio = tol_rel * f * f;
  } else {
    r.residual0 = p.omega[0] / p.delta[0] - p.omega[1] / p.delta[1];
    r.tol_ratio = tol_rel;
  }
  DressedFrame d = dressed_frame(p);
  r.residual1 = d.delta_r[0] + d.delta_r[1];
  DoublyDressedFrame dd = doubly_dressed_frame(p, d);
  r.epsilon = epsilon_correction(d, dd);
  r.residual2 = dd.omega_r[1] - dd.omega_r[0] - r.epsilon;
  r.jump_balance = std::sqrt(dd.purcell[0]) * dd.c[0] * dd.s[0] - std::sqrt(dd.purcell[1]) * dd.c[1] * dd.s[1];
  r.satisfied[0] = std::abs(r.residual0) <= r.tol_ratio;
  r.satisfied[1] = std::abs(r.residual1) <= r.tol_frequency;
  r.satisfied[2] = std::abs(r.residual2) <= r.tol_frequency;  // false for NaN
  return r;
}

}  // namespace thz
