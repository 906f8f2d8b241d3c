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

#include "thz/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "thz/errors.hpp"

namespace thz {

namespace {

constexpr double kHermTol = 1e-10;
const cplx kI(0.0, 1.0);

CMat kron_mat(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

void LindbladModel::validate() const {
  if (hamiltonian.size() == 0) throw InvalidArgument("LindbladModel: empty Hamiltonian");
  double herm = hamiltonian.hermiticity_error();
  double scale = std::max(1.0, hamiltonian.mat().cwiseAbs().maxCoeff());
  if (herm > kHermTol * scale)
    throw InvalidArgument("LindbladModel: Hamiltonian not Hermitian (error " + std::to_string(herm) + ")");
  for (const auto& j : jumps) {
    if (!(j.rate >= 0.0)) throw InvalidArgument("LindbladModel: negative rate for jump '" + j.label + "'");
    if (!j.op.same_space(hamiltonian))
      throw InvalidArgument("LindbladModel: jump '" + j.label + "' lives on a different space");
  }
  if (periodic && !periodic->amplitude.same_space(hamiltonian))
    throw InvalidArgument("LindbladModel: periodic amplitude lives on a different space");
}

int Superoperator::hilbert_dim() const {
  return static_cast<int>(std::lround(std::sqrt(static_cast<double>(data.rows()))));
}

CVec vec(const QMatrix& x) {
  return Eigen::Map<const CVec>(x.mat().data(), x.mat().size());
}

QMatrix unvec(const CVec& v, const std::vector<int>& dims) {
  int d = 1;
  for (int k : dims) d *= k;
  if (v.size() != static_cast<Eigen::Index>(d) * d) throw InvalidArgument("unvec: length mismatch");
  return QMatrix(Eigen::Map<const CMat>(v.data(), d, d), dims);
}

CMat commutator_superop(const CMat& h) {
  const Eigen::Index d = h.rows();
  CMat id = CMat::Identity(d, d);
  return (-kI * kTwoPi) * (kron_mat(id, h) - kron_mat(h.transpose(), id));
}

CMat dissipator_superop(const CMat& op) {
  const Eigen::Index d = op.rows();
  CMat id = CMat::Identity(d, d);
  CMat ada = op.adjoint() * op;
  return kron_mat(op.conjugate(), op) - 0.5 * kron_mat(id, ada) - 0.5 * kron_mat(ada.transpose(), id);
}

Superoperator liouvillian(const LindbladModel& m) {
  m.validate();
  if (m.periodic) throw InvalidArgument("liouvillian: model has a periodic term; use evolve_periodic");
  Superoperator L;
  L.dims = m.dims();
  const Eigen::Index d = m.hamiltonian.mat().rows();
  // L = I (x) K + conj(K) (x) I + sum r conj(O) (x) O with K = -i 2pi H - 1/2 sum r O^dag O
  CMat k = (-kI * kTwoPi) * m.hamiltonian.mat();
  L.data = CMat::Zero(d * d, d * d);
  for (const auto& j : m.jumps) {
    if (j.rate == 0.0) continue;
    const double r = kTwoPi * j.rate;
    const CMat& o = j.op.mat();
    k.noalias() -= (0.5 * r) * (o.adjoint() * o);
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index a = 0; a < d; ++a) {
        cplx w = r * std::conj(o(a, c));
        if (w != 0.0) L.data.block(a * d, c * d, d, d) += w * o;
      }
  }
  const CMat kc = k.conjugate();
  for (Eigen::Index a = 0; a < d; ++a) {
    L.data.block(a * d, a * d, d, d) += k;
    for (Eigen::Index c = 0; c < d; ++c)
      if (kc(a, c) != 0.0)
        for (Eigen::Index q = 0; q < d; ++q) L.data(a * d + q, c * d + q) += kc(a, c);
  }
  return L;
}

double steady_residual(const Superoperator& L, const QMatrix& rho) {
  return (L.data * vec(rho)).cwiseAbs().maxCoeff();
}

std::vector<cplx> liouvillian_spectrum(const Superoperator& L, int k) {
  Eigen::ComplexEigenSolver<CMat> es(L.data, false);
  if (es.info() != Eigen::Success) throw NumericError("liouvillian_spectrum: eigensolver did not converge");
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });
  if (k > 0 && static_cast<std::size_t>(k) < ev.size()) ev.resize(k);
  return ev;
}

namespace {

QMatrix steady_from_eigen(const Superoperator& L, const SteadyOptions& opt) {
  Eigen::ComplexEigenSolver<CMat> es(L.data, true);
  if (es.info() != Eigen::Success) throw NumericError("steady_state: eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  std::vector<Eigen::Index> order(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return ev(a).real() > ev(b).real(); });
  if (ev.size() > 1 && ev(order[1]).real() > -opt.kernel_tol)
    throw MultistabilityError("steady_state: degenerate kernel (second eigenvalue real part " +
                              std::to_string(ev(order[1]).real()) + ")");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i)
    if (std::abs(ev(i)) < std::abs(ev(best))) best = i;
  CVec v = es.eigenvectors().col(best);
  QMatrix rho = unvec(v, L.dims);
  cplx tr = rho.trace();
  if (std::abs(tr) < 1e-300) throw NumericError("steady_state: kernel vector has zero trace");
  rho *= 1.0 / tr;
  return normalize_density(rho);
}

}  // namespace

QMatrix steady_state(const Superoperator& L, const SteadyOptions& opt) {
  const int d = L.hilbert_dim();
  const Eigen::Index n = L.data.rows();
  if (static_cast<Eigen::Index>(d) * d != n) throw InvalidArgument("steady_state: superoperator side is not a square");
  if (n == 1) return QMatrix(CMat::Ones(1, 1), L.dims);

  double scale = L.data.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw MultistabilityError("steady_state: zero generator, every state is stationary");

  // Replace row 0 by the (scaled) trace functional.
  CMat A = L.data;
  A.row(0).setZero();
  for (int i = 0; i < d; ++i) A(0, static_cast<Eigen::Index>(i) * d + i) = scale;
  CVec b = CVec::Zero(n);
  b(0) = scale;

  Eigen::PartialPivLU<CMat> lu(A);
  // rcond() is unreliable for exactly singular input; check the pivots too.
  auto piv = lu.matrixLU().diagonal().cwiseAbs();
  bool suspicious = !(lu.rcond() > opt.rcond_check) || !(piv.minCoeff() > opt.rcond_check * piv.maxCoeff());
  QMatrix rho;
  if (!suspicious) {
    CVec x = lu.solve(b);
    if (x.allFinite()) rho = normalize_density(unvec(x, L.dims));
    else suspicious = true;
  }
  if (suspicious || steady_residual(L, rho) > opt.residual_tol) rho = steady_from_eigen(L, opt);

  double res = steady_residual(L, rho);
  if (res > opt.residual_tol)
    throw ConvergenceError("steady_state: residual " + std::to_string(res) + " above tolerance", res);
  return rho;
}

}  // namespace thz
