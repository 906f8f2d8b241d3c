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
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thz/conditions.hpp"
#include "thz/models.hpp"

namespace thz {

struct MaximizeOptions {
  int grid_omega = 12;   // log-spaced Omega~_R over [omega_lo, omega_hi] * Gamma
  int grid_theta = 12;   // linear theta~ over [theta_lo, theta_hi]
  double omega_lo = 1.0;
  double omega_hi = 100.0;
  double theta_lo = 0.26;
  double theta_hi = 0.780398163397448;  // pi/4 - 0.005
  double xtol = 1e-4;
  int max_iterations = 200;
};

struct OptimResult {
  double omega_r_tilde = 0.0;
  double theta_tilde = 0.0;
  double concurrence = 0.0;
  double g2_cross = 0.0;
  int evaluations = 0;
  bool converged = false;
  bool adiabatic_valid = false;  // kappa >= 2 c s chi
  bool rwa_valid = false;        // f_thz >= 10 kappa
  double purcell = 0.0;
  SystemParams params;
};

// GRWA steady-state concurrence of the reduced point; 0 where the reduction is infeasible.
double reduced_concurrence(const Cavity& cav, double omega_max, double omega_r_tilde, double theta_tilde);

OptimResult maximize_concurrence(const Cavity& cav, double omega_max, const MaximizeOptions& opt = {});

struct Axis {
  std::string name;
  double min = 0.0, max = 0.0;
  int points = 0;
  bool log = false;
  std::vector<double> values() const;
};

struct SweepPoint {
  std::size_t ix = 0, iy = 0;
  double x = 0.0, y = 0.0;
  bool ok = false;
  std::string failure;
  OptimResult best;
  double gap = 0.0;  // NaN unless requested
};

struct SweepRequest {
  Axis chi{"chi", 15.0, 100.0, 6, false};
  Axis kappa{"kappa", 10.0, 200.0, 6, false};
  // explicit axis values override the ranges above
  std::vector<double> chi_values, kappa_values;
  double f_thz = 1000.0;
  double gamma = 0.03979;
  double omega_max = 500.0;
  int n_fock = 6;
  bool compute_gap = false;
  int threads = 0;  // 0: hardware concurrency
  MaximizeOptions opt;
};

struct SweepGrid {
  std::vector<double> chi, kappa;
  double f_thz = 0.0;
  std::vector<SweepPoint> points;  // index ix * kappa.size() + iy
  const SweepPoint* best() const;
};

SweepGrid sweep_map(const SweepRequest& req);

struct PlanePoint {
  double omega1 = 0.0, omega2 = 0.0;
  bool ok = false;
  std::string failure;
  double concurrence = 0.0;
  double g2_cross = 0.0;
  ConditionReport conditions;
};

struct PlaneRequest {
  SystemParams base;
  Axis omega1{"omega1", 0.0, 0.0, 0, false};
  Axis omega2{"omega2", 0.0, 0.0, 0, false};
  int threads = 0;
};

struct PlaneResult {
  std::vector<double> omega1, omega2;
  std::vector<PlanePoint> points;  // index i1 * omega2.size() + i2
  // zero crossings of residual k along grid edges
  std::array<std::vector<std::array<double, 2>>, 3> curves;
  // pairwise intersections (0-1, 0-2, 1-2) of the continuous residual curves
  std::array<std::optional<std::array<double, 2>>, 3> pair_intersections;
  std::optional<std::array<double, 2>> intersection;  // centroid of the pairs
  double intersection_spread = 0.0;
  std::size_t argmax_concurrence = 0, argmin_g2 = 0;
  double pearson_c_g2 = 0.0;
};

PlaneResult drive_plane(const PlaneRequest& req);

struct FullValidateOptions {
  int n_fock = 4;
  double tol = 1e-6;
  int samples_per_period = 64;
};

struct FullValidation {
  double c_grwa = 0.0, c_full = 0.0, delta = 0.0;
  double oscillation = 0.0;  // in-period trace distance to the average
  double residual = 0.0;     // period-to-period trace distance
  double periods = 0.0;
  int n_fock = 0;
};

FullValidation validate_full(const SystemParams& p, const FullValidateOptions& opt = {});

}  // namespace thz
