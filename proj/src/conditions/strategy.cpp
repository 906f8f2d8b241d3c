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

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <string>

#include "thz/conditions.hpp"
#include "thz/errors.hpp"
#include "thz/observables.hpp"

namespace thz {

namespace {

using boost::math::tools::eps_tolerance;

// Root of a monotone increasing g on [lo, hi]; hi grows until g(hi) > 0.
template <class F>
double increasing_root(F g, double lo, double hi, const std::string& what) {
  double glo = g(lo);
  if (glo > 0.0) throw NumericError(what + ": no sign change at the lower bracket");
  if (glo == 0.0) return lo;
  double ghi = g(hi);
  for (int k = 0; ghi < 0.0 && k < 60; ++k) {
    lo = hi;
    glo = ghi;
    hi *= 2.0;
    ghi = g(hi);
  }
  if (!(ghi >= 0.0)) throw NumericError(what + ": root not bracketed");
  if (ghi == 0.0) return hi;
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, eps_tolerance<double>(50), iters);
  if (iters >= 200) throw NumericError(what + ": root finding did not converge");
  return 0.5 * (r.first + r.second);
}

double delta_r_of(const SystemParams& p, int i) { return dressed_frame(p).delta_r[i]; }

// Move emitter i along its constraint until Delta_R,i = target.
void tune_emitter(SystemParams& p, int i, double target, bool amplitudes_only) {
  const std::string what = "strategy step 2, emitter " + std::to_string(i + 1);
  if (amplitudes_only) {
    auto g = [&](double om) {
      SystemParams q = p;
      q.omega[i] = om;
      return delta_r_of(q, i) - target;
    };
    double hi = std::max(1.0, 2.0 * std::abs(p.omega[i]));
    p.omega[i] = increasing_root(g, 1e-12 * p.f_thz, hi, what);
    return;
  }
  const double th = dressed_frame(p).theta[i];
  const double s2 = std::sin(2.0 * th), c2 = std::cos(2.0 * th);
  auto g = [&](double om_r) {
    SystemParams q = p;
    q.omega[i] = om_r * s2;
    q.delta[i] = om_r * c2;
    return delta_r_of(q, i) - target;
  };
  double om_r = increasing_root(g, 1e-12 * p.f_thz, 2.0 * p.f_thz, what);
  p.omega[i] = om_r * s2;
  p.delta[i] = om_r * c2;
}

bool step2(SystemParams& p, const std::optional<double>& split, bool amplitudes_only, double tol) {
  DressedFrame d = dressed_frame(p);
  std::array<double, 2> target{};
  if (split) {
    target = {0.5 * *split, -0.5 * *split};
  } else {
    // keep the current splitting, centred on the sideband frequency
    double half = 0.5 * (d.delta_r[0] - d.delta_r[1]);
    target = {half, -half};
  }
  bool changed = false;
  for (int i = 0; i < 2; ++i) {
    if (std::abs(d.delta_r[i] - target[i]) <= tol) continue;
    tune_emitter(p, i, target[i], amplitudes_only);
    changed = true;
  }
  return changed;
}

double residual2_of(const SystemParams& p) { return condition_residuals(p).residual2; }

bool step3(SystemParams& p, const std::optional<double>& omega_r_tilde, double tol) {
  DressedFrame d = dressed_frame(p);
  bool changed = false;
  if (omega_r_tilde) {
    const double cc = d.c[0] * d.c[0];
    if (*omega_r_tilde < std::abs(d.delta_r[0]))
      throw InfeasibleError("strategy step 3: Omega~_R below |Delta_R1|");
    double sb = std::sqrt(*omega_r_tilde * *omega_r_tilde - d.delta_r[0] * d.delta_r[0]) / cc;
    if (std::abs(sb - p.omega_sb[0]) * cc > tol) {
      p.omega_sb[0] = sb;
      changed = true;
    }
  }
  if (!(p.omega_sb[0] > 0.0))
    throw InvalidArgument("strategy step 3: needs omega_r_tilde or a nonzero Omega_sb1");
  if (!changed && p.omega_sb[1] > 0.0) {
    double r = residual2_of(p);
    if (std::abs(r) <= tol) return false;
  }
  auto g = [&](double sb) {
    SystemParams q = p;
    q.omega_sb[1] = sb;
    return residual2_of(q);
  };
  const double scale = std::max(p.omega_sb[0], std::abs(d.delta_r[1]) / (d.c[1] * d.c[1]));
  p.omega_sb[1] = increasing_root(g, 1e-9 * scale, 2.0 * scale, "strategy step 3");
  return true;
}

double grwa_concurrence(const SystemParams& p) {
  try {
    return steady_report(p, ModelLevel::Grwa).concurrence;
  } catch (const Error&) {
    return 0.0;
  }
}

}  // namespace

StrategyTrace strategy_trace(const SystemParams& p0, const StrategyTargets& t) {
  p0.validate();
  StrategyTrace trace;
  const double tol = t.tol_rel * p0.f_thz;
  SystemParams p = p0;

  auto record = [&](const std::string& label, bool adjusted) {
    StrategyStep s;
    s.label = label;
    s.adjusted = adjusted;
    s.params = p;
    // Before the sideband drive is on, the overlap condition is undefined.
    if (p.omega_sb[0] > 0.0 && p.omega_sb[1] > 0.0) {
      s.report = condition_residuals(p, t.tol_rel);
    } else {
      SystemParams q = p;
      q.omega_sb = {0.0, 0.0};
      s.report = condition_residuals(q, t.tol_rel);
      s.report.residual2 = std::nan("");
      s.report.epsilon = std::nan("");
      s.report.satisfied[2] = false;
    }
    trace.steps.push_back(s);
  };

  // Step 1: Omega_1 = Omega_2, Delta_1 = Delta_2 unless Condition 0 already holds.
  bool adj = false;
  if (!condition_residuals(p, t.tol_rel).satisfied[0]) {
    p.omega[1] = p.omega[0];
    p.delta[1] = p.delta[0];
    adj = true;
  }
  record("initial dressing", adj);

  adj = step2(p, t.split, t.amplitudes_only, tol);
  record("spectral tuning", adj);

  adj = step3(p, t.omega_r_tilde, tol);
  record("sideband activation", adj);

  if (!t.fine_tune) return trace;

  // Step 4: scan theta~ (equivalently Delta) at fixed Omega~_R.
  const double om_t = doubly_dressed_frame(p, dressed_frame(p)).omega_r[0];
  auto at = [&](double th) {
    SystemParams q = p;
    double split = 2.0 * om_t * std::cos(2.0 * th);
    step2(q, split, t.amplitudes_only, 0.0);
    step3(q, om_t, 0.0);
    return q;
  };
  const int n = std::max(3, t.scan_points);
  std::vector<double> thetas(n);
  int best = 0;
  for (int k = 0; k < n; ++k) {
    thetas[k] = t.theta_tilde_min + (t.theta_tilde_max - t.theta_tilde_min) * k / (n - 1);
    double c = 0.0;
    try {
      c = grwa_concurrence(at(thetas[k]));
    } catch (const Error&) {
      c = 0.0;
    }
    trace.scan_split.push_back(2.0 * om_t * std::cos(2.0 * thetas[k]));
    trace.scan_concurrence.push_back(c);
    if (c > trace.scan_concurrence[best]) best = k;
  }
  double lo = thetas[std::max(0, best - 1)], hi = thetas[std::min(n - 1, best + 1)];
  std::uintmax_t iters = 60;
  auto neg = [&](double th) {
    try {
      return -grwa_concurrence(at(th));
    } catch (const Error&) {
      return 0.0;
    }
  };
  auto [th_best, negc] = boost::math::tools::brent_find_minima(neg, lo, hi, 24, iters);
  double c_now = grwa_concurrence(p);
  adj = -negc > c_now + 1e-6;
  if (adj) p = at(th_best);
  record("fine tuning", adj);
  trace.steps.back().concurrence = adj ? -negc : c_now;
  return trace;
}

}  // namespace thz
