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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thz/qmatrix.hpp"

namespace thz {

enum class PauliAxis { X = 0, Y = 1, Z = 2 };

// Rotation applied before the ring-down so that U^dag sz U is the measured Pauli.
CMat setting_rotation(PauliAxis axis);

struct MeasurementSetting {
  std::array<PauliAxis, 2> axes{};
  std::array<CMat, 2> rotation;
  int index = 0;  // 3 * axis1 + axis2
  std::string label() const;
};

// Nine joint settings, XX, XY, ..., ZZ.
std::vector<MeasurementSetting> settings();

// Pulse parameters in ordinary frequency (GHz) and ns.
struct PulseParams {
  double omega_u = 0.0;
  double duration = 0.0;
  double gamma = 0.0;
  // T = 1/(10 gamma), Omega_U = 5 pi gamma (angular rates)
  static PulseParams fast_preset(double gamma);
  // Omega_U = gamma, T = pi / (2 Omega_U) (angular rates)
  static PulseParams slow_preset(double gamma);
};

// Single-emitter pulse Hamiltonian (GHz) generating the setting rotation
// when 2 pi Omega_U T = pi/2; zero for Z.
CMat pulse_hamiltonian(PauliAxis axis, double omega_u);

struct RotationMode {
  bool pulsed = false;
  PulseParams pulse;
};

QMatrix apply_rotation(const QMatrix& rho, const MeasurementSetting& s, const RotationMode& mode = {});

struct DetectorModel {
  double eta_e = 1.0;  // p(bright | e)
  double eta_g = 1.0;  // p(dark | g)
  void validate() const;
  // single emitter, outcome order (e, g); columns are true outcomes
  Eigen::Matrix2d confusion() const;
  double determinant() const { return eta_e + eta_g - 1.0; }
  bool singular(double tol = 1e-6) const { return std::abs(determinant()) <= tol; }
};

using Probabilities = std::array<double, 4>;  // outcome order ee, eg, ge, gg
using Counts = std::array<std::uint64_t, 4>;

// Born probabilities of an already rotated two-qubit state.
Probabilities outcome_probabilities(const QMatrix& rho);
// Measured probabilities: the confusion matrix applied per emitter (1 or 2 emitters).
std::vector<double> confuse(const std::vector<double>& p, const DetectorModel& d);
// Inverse of confuse; throws SingularDetectorError at eta_e = 1 - eta_g.
std::vector<double> mitigate(const std::vector<double>& p, const DetectorModel& d);

Counts sample_shots(const QMatrix& rho, const MeasurementSetting& s, std::uint64_t n_shot, const DetectorModel& d,
                    std::uint64_t seed, const RotationMode& mode = {});

// Linear inversion from ideal probabilities of the nine settings (settings() order).
QMatrix linear_inversion(const std::vector<Probabilities>& probs);
// Drop negative eigenvalues and renormalize.
QMatrix project_physical(const QMatrix& rho_bar);

// Deterministic stream seed for (base, cell, realization, setting).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

struct TomographyOptions {
  RotationMode rotation;
  // At a singular detector eta_e is lowered by this much before inversion.
  double singular_offset = 1e-3;
};

struct TomographyRecord {
  std::uint64_t n_shot = 0;
  std::uint64_t seed = 0;
  DetectorModel detector;
  bool singular = false;
  std::vector<Counts> counts;
  std::vector<Probabilities> mitigated;
  QMatrix rho_bar, rho_phys;
  double fidelity = 0.0;
};

TomographyRecord run_tomography(const QMatrix& prepared, const QMatrix& reference, std::uint64_t n_shot,
                                const DetectorModel& d, std::uint64_t seed, const TomographyOptions& opt = {});

struct FidelityCell {
  std::uint64_t n_shot = 0;
  double eta_e = 0.0;
  bool singular = false;
  double mean = 0.0, stddev = 0.0;
  std::vector<double> fidelities;  // one per realization
};

struct FidelityStudyRequest {
  QMatrix prepared;
  std::optional<QMatrix> reference;  // defaults to the prepared state
  std::vector<std::uint64_t> n_shot;
  std::vector<double> eta_e;
  double eta_g = 0.99;
  int n_ave = 50;
  std::uint64_t seed = 0;
  TomographyOptions options;
  int threads = 0;
};

// Cells ordered n_shot-major: index = i_shot * eta_e.size() + i_eta.
std::vector<FidelityCell> fidelity_study(const FidelityStudyRequest& req);

struct WallClock {
  double per_setting = 0.0;  // s
  double total = 0.0;        // all nine settings, s
};
// T ~ 10 n_shot / gamma with gamma the angular decay rate (gamma in GHz, ordinary).
WallClock wall_clock_estimate(double n_shot, double gamma);

}  // namespace thz
