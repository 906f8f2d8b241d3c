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

#include "thz/errors.hpp"
#include "thz/observables.hpp"

namespace thz {

double gap_numeric(const Superoperator& L, GapSector sector, double im_tol) {
  std::vector<cplx> ev = liouvillian_spectrum(L);
  if (ev.size() < 2) return 0.0;
  constexpr double kZero = 1e-9;
  for (std::size_t k = 1; k < ev.size(); ++k) {
    if (sector == GapSector::Stationary && std::abs(ev[k].imag()) / kTwoPi > im_tol) continue;
    if (std::abs(ev[k].real()) < kZero) return 0.0;
    return std::abs(ev[k].real()) / kTwoPi;
  }
  return 0.0;
}

double gap_analytic(double purcell, double theta_tilde, GapMode mode) {
  if (mode == GapMode::Approx) {
    double t = std::tan(2.0 * theta_tilde);
    return 4.0 * purcell / 3.0 / (t * t);
  }
  double c4 = std::cos(4.0 * theta_tilde), c8 = std::cos(8.0 * theta_tilde);
  double lam = -(9.0 + 3.0 * c4) / 8.0 * purcell + purcell / 16.0 * std::sqrt(-40.0 * c4 + 18.0 * c8 + 86.0);
  return std::abs(lam);
}

}  // namespace thz
