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

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "thz/errors.hpp"
#include "thz/observables.hpp"

namespace thz {

namespace {

const cplx kI(0.0, 1.0);

// Row vector t with t . vec(X) = Tr(op X).
CVec trace_row(const CMat& op) {
  CMat opt = op.transpose();
  return Eigen::Map<const CVec>(opt.data(), opt.size());
}

struct Regression {
  CVec x0;    // vec(rho op^dag) - <op^dag> vec(rho)
  CVec tr;    // Tr(op .)
  double g0;  // <op^dag op> - |<op>|^2
};

Regression regression_setup(const Superoperator& L, const QMatrix& op) {
  QMatrix rho = steady_state(L);
  CMat r = rho.mat();
  CMat od = op.mat().adjoint();
  cplx mean_dag = (r * od).trace();
  Regression reg;
  reg.x0 = vec(QMatrix(r * od, rho.dims())) - mean_dag * vec(rho);
  reg.tr = trace_row(op.mat());
  reg.g0 = (reg.tr.transpose() * reg.x0)(0).real();
  return reg;
}

void check_grid(const std::vector<double>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("emission_spectrum: grid must be strictly increasing");
}

bool modal_spectrum(const Superoperator& L, const Regression& reg, const std::vector<double>& f,
                    std::vector<double>& out) {
  Eigen::ComplexEigenSolver<CMat> es(L.data, true);
  if (es.info() != Eigen::Success) return false;
  const CMat& V = es.eigenvectors();
  Eigen::PartialPivLU<CMat> lu(V);
  CVec c = lu.solve(reg.x0);
  double err = (V * c - reg.x0).norm() / std::max(reg.x0.norm(), 1e-300);
  if (!c.allFinite() || err > 1e-8) return false;  // defective / ill-conditioned eigenbasis
  CVec w = (reg.tr.transpose() * V).transpose().cwiseProduct(c);
  const auto& lam = es.eigenvalues();
  out.assign(f.size(), 0.0);
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (std::abs(lam(k)) < 1e-9 || std::abs(w(k)) == 0.0) continue;
    for (std::size_t j = 0; j < f.size(); ++j) out[j] += (-2.0 * w(k) / (lam(k) + kI * (kTwoPi * f[j]))).real();
  }
  return true;
}

// g(t) on a uniform grid by exact one-step propagation, then a direct DFT with
// the trapezoid rule.
void time_domain_spectrum(const Superoperator& L, const Regression& reg, const std::vector<double>& f,
                          std::vector<double>& out) {
  std::vector<cplx> ev = liouvillian_spectrum(L);
  double slow = 0.0, fast = 0.0;
  for (std::size_t k = 1; k < ev.size(); ++k) {
    double r = -ev[k].real();
    if (r > 1e-9 && (slow == 0.0 || r < slow)) slow = r;
    fast = std::max(fast, std::abs(ev[k]));
  }
  if (slow == 0.0) throw NumericError("emission_spectrum: no decaying modes for the time-domain path");
  double fmax = fast / kTwoPi;
  for (double x : f) fmax = std::max(fmax, std::abs(x));
  double t_end = 40.0 / slow;
  double dt = 1.0 / (40.0 * std::max(fmax, 1e-12));
  long n = static_cast<long>(std::ceil(t_end / dt));
  n = std::min<long>(n, 400000);
  dt = t_end / n;
  CMat P = (L.data * dt).exp();
  out.assign(f.size(), 0.0);
  CVec x = reg.x0;
  std::vector<cplx> rot(f.size(), 1.0), step(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) step[j] = std::exp(kI * (kTwoPi * f[j] * dt));
  std::vector<cplx> acc(f.size(), 0.0);
  for (long k = 0; k <= n; ++k) {
    cplx g = (reg.tr.transpose() * x)(0);
    double wgt = (k == 0 || k == n) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      acc[j] += wgt * g * rot[j];
      rot[j] *= step[j];
    }
    x = P * x;
  }
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = 2.0 * (acc[j] * dt).real();
}

}  // namespace

SpectrumResult emission_spectrum(const LindbladModel& m, const QMatrix& op, const std::vector<double>& grid,
                                 const SpectrumOptions& opt) {
  if (!op.same_space(m.hamiltonian)) throw InvalidArgument("emission_spectrum: operator lives on a different space");
  check_grid(grid);
  Superoperator L = liouvillian(m);
  Regression reg = regression_setup(L, op);
  std::vector<double> fm(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) fm[j] = grid[j] - opt.offset;

  SpectrumResult res;
  res.frequencies = grid;
  res.emitter_index = opt.emitter_index;
  res.channel = opt.channel;
  res.incoherent_power = reg.g0;
  bool ok = !opt.time_domain && modal_spectrum(L, reg, fm, res.intensities);
  if (!ok) {
    time_domain_spectrum(L, reg, fm, res.intensities);
    res.time_domain = true;
  }
  // Tiny negative values from cancellation are rounding noise.
  for (double& v : res.intensities) v = std::max(v, 0.0);
  return res;
}

}  // namespace thz
