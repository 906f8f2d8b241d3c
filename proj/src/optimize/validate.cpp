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
#include "thz/optimize.hpp"

namespace thz {

FullValidation validate_full(const SystemParams& p_in, const FullValidateOptions& opt) {
  SystemParams p = p_in;
  p.n_fock = opt.n_fock;
  p.validate();
  FullValidation v;
  v.n_fock = opt.n_fock;
  v.c_grwa = steady_report(p, ModelLevel::Grwa).concurrence;

  LindbladModel m = build_full_model(p);
  PeriodAverageOptions pa;
  pa.tol = opt.tol;
  pa.samples_per_period = opt.samples_per_period;
  pa.frame = grwa_frame_generator(p);
  QMatrix rho0 = QMatrix::identity(m.dims());
  rho0 *= 1.0 / rho0.trace().real();
  PeriodAverageResult r = period_averaged_steady(m, rho0, pa);
  v.c_full = concurrence(partial_trace(r.rho, {0, 1}));
  v.delta = v.c_grwa - v.c_full;
  v.oscillation = r.oscillation;
  v.residual = r.residual;
  v.periods = r.periods;
  return v;
}

}  // namespace thz
