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
#include <string>
#include <vector>

#include "thz/lindblad.hpp"

namespace thz {

// All frequencies are ordinary frequencies in GHz (omega / 2 pi).
struct SystemParams {
  double f_thz = 1000.0;
  std::array<double, 2> delta{0.0, 0.0};
  std::array<double, 2> omega{0.0, 0.0};
  std::array<double, 2> omega_sb{0.0, 0.0};
  std::array<double, 2> chi{0.0, 0.0};
  double kappa = 0.0;
  std::array<double, 2> gamma{0.0, 0.0};
  int n_fock = 8;

  void validate() const;
};

struct DressedFrame {
  std::array<double, 2> theta{}, omega_r{}, c{}, s{};
  std::array<double, 2> lamb{};     // Lamb shift
  std::array<double, 2> delta_r{};  // Omega_R - f_thz - Lambda
  std::array<double, 2> g{};        // dressed Jaynes-Cummings coupling -2 chi c s
  double J = 0.0;
};

struct DoublyDressedFrame {
  std::array<double, 2> theta{}, omega_r{}, c{}, s{};
  std::array<double, 2> purcell{};  // Gamma_i
};

DressedFrame dressed_frame(const SystemParams& p);
DoublyDressedFrame doubly_dressed_frame(const SystemParams& p, const DressedFrame& d);

// Basis change for one two-level factor: columns of R(theta) are the new
// (upper, lower) states in the old basis, R = [[c, -s], [s, c]].
QMatrix rotation(double theta);
// O expressed in the rotated basis: R^T O R.
QMatrix to_rotated(const QMatrix& op, double theta);

// Bare sigma in the dressed basis: c^2 xi - s^2 xi^dag + c s xi_z.
QMatrix sigma_in_dressed(double theta);

// Positive-frequency part of the cavity quadrature a + a^dag in the
// eigenbasis of h_static, weighted by sqrt(w_kj / f_thz).
QMatrix build_xplus(const QMatrix& h_static, const QMatrix& a, double f_thz);

// emitter 1 (x) emitter 2 (x) cavity, omega_L frame, periodic sideband drive.
LindbladModel build_full_model(const SystemParams& p);
// Static part of the full-model Hamiltonian on its own.
QMatrix full_static_hamiltonian(const SystemParams& p);
// Frame generator f (xi_z1/2 + xi_z2/2 + a^dag a) in bare coordinates; the
// full model's density matrix in this frame matches the GRWA frame.
QMatrix grwa_frame_generator(const SystemParams& p);

// Dressed emitters (x) cavity in the GRWA frame.
LindbladModel build_grwa_model(const SystemParams& p);
// Two dressed qubits after adiabatic elimination of the cavity.
LindbladModel build_adiabatic_model(const SystemParams& p);

struct DoublyDressedOptions {
  bool crossed_lplus = false;  // emitter-crossed L+ as printed
  bool emitter_decay = true;
};
LindbladModel build_doubly_dressed_model(const SystemParams& p, const DoublyDressedOptions& opt = {});
// Same model from the frame alone (no emitter decay).
LindbladModel build_doubly_dressed_model(const DoublyDressedFrame& dd, double J, bool crossed_lplus = false);
// Symmetric case: Gamma1 = Gamma2, theta~2 = pi/2 - theta~1, equal Omega~_R.
DoublyDressedFrame symmetric_doubly_dressed_frame(double purcell, double theta_tilde, double omega_r_tilde);

// Two-qubit GRWA Hamiltonian without cavity (the H_q block).
QMatrix grwa_qubit_hamiltonian(const SystemParams& p, const DressedFrame& d);

// Two-qubit state in the doubly-dressed basis -> bare basis.
CMat doubly_dressed_to_bare(const DressedFrame& d, const DoublyDressedFrame& dd);
// Dressed (x) cavity -> bare, or dressed two-qubit -> bare.
CMat dressed_to_bare(const DressedFrame& d, int n_fock);

}  // namespace thz
