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

#include <string>
#include <vector>

#include "thz/lindblad.hpp"
#include "thz/models.hpp"

namespace thz {

// Wootters concurrence of a two-qubit density matrix.
double concurrence(const QMatrix& rho);
// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const QMatrix& rho, const QMatrix& sigma);
// <s1^dag s2^dag s1 s2> / (<s1^dag s1><s2^dag s2>) on a bare two-qubit state.
double g2_cross(const QMatrix& rho);

struct SpectrumOptions {
  // Added to the model-frame frequencies: grid values are model frequency + offset.
  double offset = 0.0;
  int emitter_index = 0;
  std::string channel = "optical";
  bool time_domain = false;  // force the time-domain + DFT path
};

struct SpectrumResult {
  std::vector<double> frequencies;
  std::vector<double> intensities;  // per GHz; integral = <op^dag op> - |<op>|^2
  int emitter_index = 0;
  std::string channel;
  double incoherent_power = 0.0;  // <op^dag op> - |<op>|^2
  bool time_domain = false;
};

SpectrumResult emission_spectrum(const LindbladModel& m, const QMatrix& op, const std::vector<double>& grid,
                                 const SpectrumOptions& opt = {});

struct DarkState {
  CVec doubly_dressed;  // basis |++>, |+->, |-+>, |-->
  CVec bare;            // basis |ee>, |eg>, |ge>, |gg>
};
// Pure state annihilated by the (uncrossed) collective jumps:
// sqrt(G1) c1^2 |-+> - sqrt(G2) c2^2 |+->, normalized.
DarkState dark_state(const DressedFrame& d, const DoublyDressedFrame& dd);

enum class GapSector { All, Stationary };
// |Re lambda| / 2 pi of the slowest decaying mode (GHz). Stationary restricts
// the search to modes with |Im lambda| below im_tol (relative to 2 pi GHz).
double gap_numeric(const Superoperator& L, GapSector sector = GapSector::All, double im_tol = 1e-6);

enum class GapMode { Approx, Exact };
double gap_analytic(double purcell, double theta_tilde, GapMode mode);

enum class ModelLevel { Grwa, Adiabatic, DoublyDressed };

struct ReportOptions {
  bool compute_gap = false;
  bool crossed_lplus = false;
};

struct SteadyReport {
  QMatrix rho;  // two emitters, bare basis
  double concurrence = 0.0;
  double g2_cross = 0.0;  // NaN when a population vanishes
  double gap = 0.0;       // NaN unless requested
  double dark_overlap = 0.0;
  std::vector<std::string> warnings;
};

SteadyReport steady_report(const SystemParams& p, ModelLevel level, const ReportOptions& opt = {});
// Reduced two-emitter state of a GRWA steady state, mapped to the bare basis.
QMatrix grwa_emitter_state(const QMatrix& rho_grwa, const DressedFrame& d);

}  // namespace thz
