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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

#include "thz/errors.hpp"
#include "thz/lindblad.hpp"

namespace thz {

namespace odeint = boost::numeric::odeint;

namespace {

// Complex state of n columns stored as interleaved re/im doubles so the
// odeint error norm sees plain reals.
using State = RVec;

Eigen::Map<const CMat> as_cmat(const State& s, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const CMat>(reinterpret_cast<const cplx*>(s.data()), rows, cols);
}
Eigen::Map<CMat> as_cmat(State& s, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<CMat>(reinterpret_cast<cplx*>(s.data()), rows, cols);
}

// dX/dt = L(t) X with L(t) = L0 + e^{+i w t} Lp + e^{-i w t} Lm.
struct PeriodicRhs {
  const CMat* L0;
  const CMat* Lp;  // nullptr if static
  const CMat* Lm;
  double omega;
  Eigen::Index cols;
  CMat work;

  void operator()(const State& x, State& dxdt, double t) {
    const Eigen::Index n = L0->rows();
    auto X = as_cmat(x, n, cols);
    dxdt.resize(x.size());
    auto Y = as_cmat(dxdt, n, cols);
    if (!Lp) {
      Y.noalias() = (*L0) * X;
      return;
    }
    cplx e(std::cos(omega * t), std::sin(omega * t));
    work = *L0;
    work += e * (*Lp);
    work += std::conj(e) * (*Lm);
    Y.noalias() = work * X;
  }
};

struct Generator {
  CMat L0, Lp, Lm;
  double omega = 0.0;
  bool periodic = false;
};

Generator make_generator(const LindbladModel& m) {
  m.validate();
  Generator g;
  LindbladModel stat = m;
  stat.periodic.reset();
  g.L0 = liouvillian(stat).data;
  if (m.periodic) {
    const CMat& A = m.periodic->amplitude.mat();
    g.Lp = commutator_superop(A);
    g.Lm = commutator_superop(A.adjoint());
    g.omega = kTwoPi * m.periodic->frequency;
    g.periodic = true;
  }
  return g;
}

// Integrate dX/dt = L(t) X from t0 to each of `times`, calling obs(i, X).
template <class Obs>
void integrate(const Generator& g, const CMat& X0, double t0, const std::vector<double>& times,
               const EvolveOptions& opt, Obs&& obs) {
  const Eigen::Index n = X0.rows(), cols = X0.cols();
  State x(2 * n * cols);
  as_cmat(x, n, cols) = X0;
  PeriodicRhs rhs{&g.L0, g.periodic ? &g.Lp : nullptr, g.periodic ? &g.Lm : nullptr, g.omega, cols, {}};

  using Stepper = odeint::runge_kutta_fehlberg78<State, double, State, double, odeint::vector_space_algebra>;
  auto stepper = odeint::make_controlled(opt.atol, opt.rtol, Stepper());

  double t = t0;
  double dt = times.empty() ? 0.0 : std::max((times.front() - t0) / 16.0, opt.min_step);
  if (!(dt > 0.0) && !times.empty()) dt = (times.back() - t0) / 16.0;
  long steps = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double target = times[i];
    while (t < target) {
      double h = std::min(dt, target - t);
      // try_step advances t on success and updates h to the next suggestion
      odeint::controlled_step_result r = stepper.try_step(rhs, x, t, h);
      dt = h;
      if (r != odeint::success && dt < opt.min_step)
        throw NumericError("evolve: step size underflow at t = " + std::to_string(t));
      if (target - t <= 1e-13 * std::abs(target)) t = target;
      if (++steps > opt.max_steps) throw NumericError("evolve: step limit exceeded");
    }
    obs(i, as_cmat(x, n, cols));
  }
}

}  // namespace

std::vector<TrajectoryPoint> evolve_periodic(const LindbladModel& m, const QMatrix& rho0, double t_end,
                                             double dt, const EvolveOptions& opt) {
  require_density(rho0);
  if (!rho0.same_space(m.hamiltonian)) throw InvalidArgument("evolve_periodic: rho0 lives on a different space");
  if (!(t_end >= 0.0) || !(dt > 0.0)) throw InvalidArgument("evolve_periodic: need t_end >= 0 and dt > 0");
  Generator g = make_generator(m);

  std::vector<double> times;
  long nsteps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  for (long k = 1; k <= nsteps; ++k) times.push_back(std::min(k * dt, t_end));

  std::vector<TrajectoryPoint> out;
  out.push_back({0.0, rho0});
  CMat x0 = vec(rho0);
  integrate(g, x0, 0.0, times, opt, [&](std::size_t i, const auto& X) {
    out.push_back({times[i], unvec(CVec(X.col(0)), rho0.dims())});
  });
  return out;
}

PeriodAverageResult period_averaged_steady(const LindbladModel& m, const QMatrix& rho0,
                                           const PeriodAverageOptions& opt) {
  if (!m.periodic) throw InvalidArgument("period_averaged_steady: model has no periodic term");
  if (!(m.periodic->frequency > 0.0)) throw InvalidArgument("period_averaged_steady: frequency must be > 0");
  require_density(rho0);
  Generator g = make_generator(m);
  const double period = 1.0 / m.periodic->frequency;
  const Eigen::Index n = g.L0.rows();
  const auto& dims = rho0.dims();

  // One-period propagator.
  CMat P;
  integrate(g, CMat::Identity(n, n), 0.0, {period}, opt.ode, [&](std::size_t, const auto& X) { P = X; });

  // Fast-forward by repeated squaring until doubling the horizon no longer
  // moves the stroboscopic state.
  CVec v0 = vec(rho0);
  CMat Q = P;
  double periods = 1.0;
  CVec v = Q * v0;
  double change = 1.0;
  int k = 0;
  for (; k < opt.max_doublings; ++k) {
    CMat Q2 = Q * Q;
    CVec v2 = Q2 * v0;
    change = trace_distance(unvec(v, dims), unvec(v2, dims));
    Q = std::move(Q2);
    v = std::move(v2);
    periods *= 2.0;
    if (change < opt.tol) break;
  }
  QMatrix strobe = normalize_density(unvec(v, dims));
  if (change >= opt.tol)
    throw ConvergenceError("period_averaged_steady: no convergence after " + std::to_string(periods) +
                               " periods (change " + std::to_string(change) + ")",
                           change);

  // Sample one period.
  const int M = std::max(opt.samples_per_period, 2);
  std::vector<double> times;
  for (int j = 1; j < M; ++j) times.push_back(period * j / M);
  std::vector<CMat> samples;
  samples.push_back(strobe.mat());
  integrate(g, vec(strobe), 0.0, times, opt.ode,
            [&](std::size_t, const auto& X) { samples.push_back(unvec(CVec(X.col(0)), dims).mat()); });

  // Frame rotation U(t) = V exp(-i 2 pi g t) V^dag.
  Eigen::SelfAdjointEigenSolver<CMat> fes;
  if (opt.frame) {
    if (!opt.frame->same_space(rho0)) throw InvalidArgument("period_averaged_steady: frame lives on a different space");
    fes.compute(0.5 * (opt.frame->mat() + opt.frame->mat().adjoint()));
  }
  auto to_frame = [&](const CMat& r, double t) -> CMat {
    if (!opt.frame) return r;
    const auto& V = fes.eigenvectors();
    CVec ph = (fes.eigenvalues() * (-kTwoPi * t)).unaryExpr([](double a) { return cplx(std::cos(a), std::sin(a)); });
    CMat U = V * ph.asDiagonal() * V.adjoint();
    return U.adjoint() * r * U;
  };

  CMat avg = CMat::Zero(samples[0].rows(), samples[0].cols());
  std::vector<CMat> framed;
  for (int j = 0; j < M; ++j) {
    framed.push_back(to_frame(samples[j], period * j / M));
    avg += framed.back();
  }
  avg /= static_cast<double>(M);

  PeriodAverageResult res;
  res.rho = normalize_density(QMatrix(avg, dims));
  res.stroboscopic = strobe;
  res.residual = change;
  res.periods = periods;
  for (const auto& f : framed) res.oscillation = std::max(res.oscillation, trace_distance(QMatrix(f, dims), res.rho));
  return res;
}

}  // namespace thz
