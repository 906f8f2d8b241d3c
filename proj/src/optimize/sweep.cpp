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

#include "detail/pool.hpp"
#include "thz/errors.hpp"
#include "thz/observables.hpp"
#include "thz/optimize.hpp"

namespace thz {

std::vector<double> Axis::values() const {
  if (points < 0) throw InvalidArgument("axis " + name + ": negative point count");
  if (log && !(min > 0.0 && max > 0.0)) throw InvalidArgument("axis " + name + ": log axis needs positive bounds");
  std::vector<double> v(points);
  for (int k = 0; k < points; ++k) {
    double u = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    v[k] = log ? min * std::pow(max / min, u) : min + (max - min) * u;
  }
  return v;
}

const SweepPoint* SweepGrid::best() const {
  const SweepPoint* b = nullptr;
  for (const auto& p : points)
    if (p.ok && (!b || p.best.concurrence > b->best.concurrence)) b = &p;
  return b;
}

SweepGrid sweep_map(const SweepRequest& req) {
  SweepGrid g;
  g.f_thz = req.f_thz;
  g.chi = req.chi_values.empty() ? req.chi.values() : req.chi_values;
  g.kappa = req.kappa_values.empty() ? req.kappa.values() : req.kappa_values;
  const std::size_t nk = g.kappa.size();
  g.points.resize(g.chi.size() * nk);
  detail::parallel_for(g.points.size(), req.threads, [&](std::size_t k) {
    SweepPoint& sp = g.points[k];
    sp.ix = k / nk;
    sp.iy = k % nk;
    sp.x = g.chi[sp.ix];
    sp.y = g.kappa[sp.iy];
    sp.gap = std::numeric_limits<double>::quiet_NaN();
    Cavity cav{sp.x, sp.y, req.f_thz, req.gamma, req.n_fock};
    try {
      sp.best = maximize_concurrence(cav, req.omega_max, req.opt);
      if (req.compute_gap) sp.gap = gap_numeric(liouvillian(build_grwa_model(sp.best.params)));
      sp.ok = true;
    } catch (const std::exception& e) {
      sp.failure = e.what();
    }
  });
  return g;
}

}  // namespace thz
