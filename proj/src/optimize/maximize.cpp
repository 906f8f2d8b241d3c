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

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>

#include "thz/errors.hpp"
#include "thz/observables.hpp"
#include "thz/optimize.hpp"

namespace thz {

namespace {

struct Objective {
  const Cavity* cav;
  double omega_max;
  double theta_lo, theta_hi;
  double lw_lo, lw_hi;  // box on log Omega~_R
  int evaluations = 0;
};

// x = (log Omega~_R, theta~); returns -C.
double neg_concurrence(const gsl_vector* x, void* params) {
  auto* obj = static_cast<Objective*>(params);
  double lw = gsl_vector_get(x, 0), th = gsl_vector_get(x, 1);
  if (!(th > 0.0 && th <= obj->theta_hi + 1e-12)) return 0.0;
  if (!(lw >= obj->lw_lo && lw <= obj->lw_hi)) return 0.0;
  ++obj->evaluations;
  return -reduced_concurrence(*obj->cav, obj->omega_max, std::exp(lw), th);
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

}  // namespace

double reduced_concurrence(const Cavity& cav, double omega_max, double omega_r_tilde, double theta_tilde) {
  try {
    ReducedPoint rp = reduce_parameters(omega_r_tilde, theta_tilde, omega_max, cav);
    return steady_report(rp.derived, ModelLevel::Grwa).concurrence;
  } catch (const InfeasibleError&) {
    return 0.0;
  } catch (const NumericError&) {
    return 0.0;
  }
}

OptimResult maximize_concurrence(const Cavity& cav, double omega_max, const MaximizeOptions& opt) {
  if (!(cav.chi > 0.0) || !(cav.kappa > 0.0) || !(cav.f_thz > 0.0) || cav.gamma < 0.0 || !(omega_max > 0.0))
    throw InvalidArgument("maximize_concurrence: cavity parameters must be positive");
  if (opt.grid_omega < 1 || opt.grid_theta < 1 || !(opt.theta_lo < opt.theta_hi))
    throw InvalidArgument("maximize_concurrence: empty search grid");

  static std::once_flag gsl_quiet;
  std::call_once(gsl_quiet, [] { gsl_set_error_handler_off(); });

  // Purcell rate estimate for the grid: Omega~_R << f_thz, so Omega_R1 ~ f + 8 chi^2 / f.
  const double s2 = std::min(1.0, omega_max / (cav.f_thz + 8.0 * cav.chi * cav.chi / cav.f_thz));
  const double purcell = 4.0 * std::pow(s2 * cav.chi, 2) / cav.kappa;

  const double lw_lo = std::log(opt.omega_lo * purcell), lw_hi = std::log(opt.omega_hi * purcell);
  // the simplex may leave the grid by a decade on either side
  Objective obj{&cav, omega_max, opt.theta_lo, opt.theta_hi, lw_lo - std::log(10.0), lw_hi + std::log(10.0)};
  auto grid_at = [](double lo, double hi, int n, int k) { return n == 1 ? lo : lo + (hi - lo) * k / (n - 1); };

  double best_c = -1.0, best_lw = 0.0, best_th = 0.0;
  bool any_feasible = false;
  for (int i = 0; i < opt.grid_omega; ++i)
    for (int j = 0; j < opt.grid_theta; ++j) {
      double lw = grid_at(lw_lo, lw_hi, opt.grid_omega, i);
      double th = grid_at(opt.theta_lo, opt.theta_hi, opt.grid_theta, j);
      double c = 0.0;
      ++obj.evaluations;
      try {
        ReducedPoint rp = reduce_parameters(std::exp(lw), th, omega_max, cav);
        any_feasible = true;
        c = steady_report(rp.derived, ModelLevel::Grwa).concurrence;
      } catch (const InfeasibleError&) {
        continue;
      } catch (const NumericError&) {
        c = 0.0;
      }
      if (c > best_c) {
        best_c = c;
        best_lw = lw;
        best_th = th;
      }
    }
  if (!any_feasible) throw InfeasibleError("maximize_concurrence: every grid point is infeasible");

  // Simplex refinement from the best cell, step half a grid spacing.
  gsl_multimin_function fn{&neg_concurrence, 2, &obj};
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(2)), step(gsl_vector_alloc(2));
  gsl_vector_set(x.get(), 0, best_lw);
  gsl_vector_set(x.get(), 1, best_th);
  double dlw = opt.grid_omega > 1 ? 0.5 * (lw_hi - lw_lo) / (opt.grid_omega - 1) : 0.1;
  double dth = opt.grid_theta > 1 ? 0.5 * (opt.theta_hi - opt.theta_lo) / (opt.grid_theta - 1) : 0.01;
  gsl_vector_set(step.get(), 0, dlw);
  gsl_vector_set(step.get(), 1, dth);
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> mz(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2));
  gsl_multimin_fminimizer_set(mz.get(), &fn, x.get(), step.get());
  bool converged = false;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(mz.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(mz.get()), opt.xtol) == GSL_SUCCESS) {
      converged = true;
      break;
    }
  }
  double lw = gsl_vector_get(mz->x, 0), th = gsl_vector_get(mz->x, 1);
  if (-mz->fval < best_c) {  // never worse than the grid
    lw = best_lw;
    th = best_th;
  }

  OptimResult r;
  r.omega_r_tilde = std::exp(lw);
  r.theta_tilde = th;
  ReducedPoint rp = reduce_parameters(r.omega_r_tilde, th, omega_max, cav);
  SteadyReport rep = steady_report(rp.derived, ModelLevel::Grwa);
  ++obj.evaluations;
  r.concurrence = rep.concurrence;
  r.g2_cross = rep.g2_cross;
  r.evaluations = obj.evaluations;
  r.converged = converged;
  r.params = rp.derived;
  r.purcell = 4.0 * std::pow(std::sin(2.0 * rp.theta) * cav.chi, 2) / cav.kappa;
  r.adiabatic_valid = cav.kappa >= std::sin(2.0 * rp.theta) * cav.chi;
  r.rwa_valid = cav.f_thz >= 10.0 * cav.kappa;
  return r;
}

}  // namespace thz
