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

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "thz/models.hpp"

namespace thz {

struct ConditionReport {
  double residual0 = 0.0;  // Omega1/Delta1 - Omega2/Delta2, or the cross product when a Delta is 0
  double residual1 = 0.0;  // Delta_R1 + Delta_R2 (GHz)
  double residual2 = 0.0;  // Omega~_R2 - Omega~_R1 - epsilon (GHz)
  double epsilon = 0.0;
  bool cross_product_form = false;
  // sqrt(G1) c~1 s~1 - sqrt(G2) c~2 s~2, the unequal-rate form of the jump condition
  double jump_balance = 0.0;
  double tol_frequency = 0.0;
  double tol_ratio = 0.0;
  std::array<bool, 3> satisfied{};
  bool all() const { return satisfied[0] && satisfied[1] && satisfied[2]; }
};

// tol_rel scales the tolerances: tol_rel * f_thz for frequencies, tol_rel for
// the ratio (tol_rel * f_thz^2 for the cross product).
ConditionReport condition_residuals(const SystemParams& p, double tol_rel = 1e-4);

// epsilon = J sin2th~1 sin2th~2 (r - 1/r), r = sqrt(G1) c~1^2 / (sqrt(G2) c~2^2).
double epsilon_correction(const DressedFrame& d, const DoublyDressedFrame& dd);

struct AppBSolution {
  double E = 0.0;
  double residual = 0.0;  // first equation minus second; 0 iff the overlap condition holds
  std::array<double, 2> energies{};
};
AppBSolution appb_eigen_system(const DoublyDressedFrame& dd, double J);

struct Cavity {
  double chi = 0.0;
  double kappa = 0.0;
  double f_thz = 1000.0;
  double gamma = 0.0;
  int n_fock = 6;
};

struct ReducedPoint {
  double omega_r_tilde = 0.0;
  double theta_tilde = 0.0;  // requested theta~1
  double omega_max = 0.0;
  double theta = 0.0;                // primary angle, both emitters
  double theta_tilde_realized = 0.0;  // theta~1 after the Lamb-shift fixed point
  SystemParams derived;
};

// Two doubly-dressed parameters -> full drive set with Omega1 = omega_max.
// Throws InfeasibleError when no point with Omega2 <= omega_max exists.
ReducedPoint reduce_parameters(double omega_r_tilde, double theta_tilde, double omega_max, const Cavity& cav);

struct StrategyTargets {
  std::optional<double> omega_r_tilde;  // Step 3 sideband dressing; else keep p0's Omega_sb1
  std::optional<double> split;          // Step 2 Delta = Delta_R1 - Delta_R2; else keep the current one
  bool amplitudes_only = false;         // Step 2 tunes Omega_i with Delta_i fixed
  bool fine_tune = true;                // Step 4
  int scan_points = 21;
  double theta_tilde_min = 0.26;
  double theta_tilde_max = 0.78;
  double tol_rel = 1e-4;
};

struct StrategyStep {
  std::string label;
  bool adjusted = false;
  SystemParams params;
  ConditionReport report;
  double concurrence = -1.0;  // filled in by Step 4
};

struct StrategyTrace {
  std::vector<StrategyStep> steps;
  std::vector<double> scan_split, scan_concurrence;  // Step 4 C(Delta)
};

StrategyTrace strategy_trace(const SystemParams& p0, const StrategyTargets& targets = {});

}  // namespace thz
