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

#include <optional>
#include <string>
#include <vector>

#include "thz/qmatrix.hpp"

namespace thz {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Jump {
  QMatrix op;
  double rate = 0.0;  // ordinary frequency, GHz
  std::string label;
};

// A * exp(+i 2 pi f t) + A^dag * exp(-i 2 pi f t)
struct PeriodicTerm {
  QMatrix amplitude;
  double frequency = 0.0;
};

struct LindbladModel {
  QMatrix hamiltonian;  // GHz (ordinary frequency)
  std::optional<PeriodicTerm> periodic;
  std::vector<Jump> jumps;
  std::vector<std::string> warnings;

  const std::vector<int>& dims() const { return hamiltonian.dims(); }
  int hilbert_dim() const { return hamiltonian.size(); }
  // Throws InvalidArgument on a non-Hermitian H, negative rate or dims mismatch.
  void validate() const;
};

// Column-stacking: vec(A X B) = (B^T kron A) vec(X).
struct Superoperator {
  CMat data;
  std::vector<int> dims;
  int hilbert_dim() const;
};

CVec vec(const QMatrix& x);
QMatrix unvec(const CVec& v, const std::vector<int>& dims);

Superoperator liouvillian(const LindbladModel& m);
// Coherent part only, -i 2 pi [H, .] for an arbitrary (not necessarily
// Hermitian) operator H; used for the periodic drive pieces.
CMat commutator_superop(const CMat& h);
CMat dissipator_superop(const CMat& op);

struct SteadyOptions {
  double residual_tol = 1e-9;
  // rcond of the trace-replaced system below which the kernel is checked
  // with the eigensolver.
  double rcond_check = 1e-13;
  double kernel_tol = 1e-9;
};

QMatrix steady_state(const Superoperator& L, const SteadyOptions& opt = {});
// max |L vec(rho)|
double steady_residual(const Superoperator& L, const QMatrix& rho);

// k eigenvalues with the largest real parts, sorted descending by real part
// (ties broken by imaginary part). k <= 0 returns all of them.
std::vector<cplx> liouvillian_spectrum(const Superoperator& L, int k = 0);

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double min_step = 1e-14;  // ns
  long max_steps = 50'000'000;
};

struct TrajectoryPoint {
  double t;
  QMatrix rho;
};

// Samples at t = 0, dt, 2 dt, ..., t_end (the last sample is t_end exactly).
std::vector<TrajectoryPoint> evolve_periodic(const LindbladModel& m, const QMatrix& rho0,
                                             double t_end, double dt, const EvolveOptions& opt = {});

struct PeriodAverageOptions {
  double tol = 1e-6;           // period-to-period trace distance
  int max_doublings = 40;      // horizon = 2^max_doublings periods
  int samples_per_period = 64;
  // Optional Hermitian generator G (GHz). The average is taken over
  // U(t)^dag rho(t) U(t) with U(t) = exp(-i 2 pi G t).
  std::optional<QMatrix> frame;
  EvolveOptions ode;
};

struct PeriodAverageResult {
  QMatrix rho;               // averaged, Hermitized, unit trace
  QMatrix stroboscopic;      // fixed point at t = 0 mod period
  double residual = 0.0;     // final period-to-period trace distance
  double oscillation = 0.0;  // max trace distance of the in-period samples to the average
  double periods = 0.0;      // periods propagated before averaging
};

PeriodAverageResult period_averaged_steady(const LindbladModel& m, const QMatrix& rho0,
                                           const PeriodAverageOptions& opt = {});

}  // namespace thz
