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
#include <numbers>
#include <string>

#include "thz/conditions.hpp"
#include "thz/errors.hpp"

namespace thz {

namespace {

constexpr int kThetaPasses = 3;
constexpr int kOverlapPasses = 50;

}  // namespace

ReducedPoint reduce_parameters(double omega_r_tilde, double theta_tilde, double omega_max, const Cavity& cav) {
  if (!(theta_tilde > 0.0 && theta_tilde < 0.5 * std::numbers::pi))
    throw InvalidArgument("reduce_parameters: theta~ must lie in (0, pi/2)");
  if (!(omega_max > 0.0) || !(omega_r_tilde > 0.0) || !std::isfinite(omega_max) || !std::isfinite(omega_r_tilde))
    throw InvalidArgument("reduce_parameters: omega_max and Omega~_R must be positive");
  if (!(cav.f_thz > 0.0) || cav.chi < 0.0 || cav.kappa < 0.0 || cav.gamma < 0.0)
    throw InvalidArgument("reduce_parameters: bad cavity parameters");

  const double f = cav.f_thz;
  const double lamb_coef = 8.0 * cav.chi * cav.chi / f;  // Lambda = lamb_coef cos 2 theta
  const double dr_target = omega_r_tilde * std::cos(2.0 * theta_tilde);
  if (dr_target < -1e-12 * f)
    throw InfeasibleError("reduce_parameters: theta~1 > pi/4 puts Omega2 above omega_max");

  // Seed with Lambda ~ 8 chi^2 / f, then refine cos 2 theta in the Lamb shift.
  double omega_r1 = f + lamb_coef + dr_target;
  double theta = 0.0;
  for (int pass = 0; pass <= kThetaPasses; ++pass) {
    double ratio = omega_max / omega_r1;
    if (ratio > 1.0)
      throw InfeasibleError("reduce_parameters: Omega_R1 = " + std::to_string(omega_r1) + " below omega_max");
    theta = 0.5 * std::asin(ratio);
    if (pass < kThetaPasses) omega_r1 = f + lamb_coef * std::cos(2.0 * theta) + dr_target;
  }
  const double c2th = std::cos(2.0 * theta), s2th = std::sin(2.0 * theta);
  omega_r1 = omega_max / s2th;
  const double lamb = lamb_coef * c2th;
  const double dr1 = omega_r1 - f - lamb;
  const double dr2 = -dr1;
  const double omega_r2 = f + lamb + dr2;
  if (!(omega_r2 > 0.0)) throw InfeasibleError("reduce_parameters: Delta_R1 exceeds the carrier splitting");

  SystemParams p;
  p.f_thz = f;
  p.chi = {cav.chi, cav.chi};
  p.kappa = cav.kappa;
  p.gamma = {cav.gamma, cav.gamma};
  p.n_fock = cav.n_fock;
  p.omega = {omega_max, omega_r2 * s2th};
  p.delta = {omega_r1 * c2th, omega_r2 * c2th};

  const double cc = std::cos(theta) * std::cos(theta);
  if (omega_r_tilde < std::abs(dr1))
    throw InfeasibleError("reduce_parameters: Omega~_R1 below |Delta_R1|");
  const double drive1 = std::sqrt(omega_r_tilde * omega_r_tilde - dr1 * dr1);

  // Emitter 2: Omega~_R2 = Omega~_R1 + epsilon(theta~2) at fixed Delta_R2.
  const double purcell = cav.kappa > 0.0 ? 4.0 * std::pow(s2th * cav.chi, 2) / cav.kappa : 0.0;
  const double J = 2.0 * cav.chi * cav.chi * c2th * c2th / f;
  const double th1 = 0.5 * std::atan2(drive1, dr1);
  const double a = std::sqrt(purcell) * std::pow(std::cos(th1), 2);
  double omega_t2 = omega_r_tilde;
  double drive2 = 0.0;
  for (int pass = 0; pass < kOverlapPasses; ++pass) {
    if (omega_t2 < std::abs(dr2))
      throw InfeasibleError("reduce_parameters: overlap condition needs Omega~_R2 below |Delta_R2|");
    drive2 = std::sqrt(omega_t2 * omega_t2 - dr2 * dr2);
    double th2 = 0.5 * std::atan2(drive2, dr2);
    double eps = 0.0;
    if (J != 0.0 && purcell > 0.0) {
      double b = std::sqrt(purcell) * std::pow(std::cos(th2), 2);
      eps = J * std::sin(2.0 * th1) * std::sin(2.0 * th2) * (a / b - b / a);
    }
    double next = omega_r_tilde + eps;
    bool done = std::abs(next - omega_t2) <= 1e-15 * omega_r_tilde;
    omega_t2 = next;
    if (done) break;
  }
  drive2 = std::sqrt(std::max(0.0, omega_t2 * omega_t2 - dr2 * dr2));
  p.omega_sb = {drive1 / cc, drive2 / cc};

  ReducedPoint out;
  out.omega_r_tilde = omega_r_tilde;
  out.theta_tilde = theta_tilde;
  out.omega_max = omega_max;
  out.theta = theta;
  out.theta_tilde_realized = th1;
  out.derived = p;
  return out;
}

}  // namespace thz
