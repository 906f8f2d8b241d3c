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

#include "thz/qmatrix.hpp"

#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "thz/errors.hpp"

namespace thz {

namespace {

int product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

void require_same(const QMatrix& a, const QMatrix& b, const char* what) {
  if (a.dims() != b.dims())
    throw InvalidArgument(std::string(what) + ": operand dimensions differ");
}

}  // namespace

QMatrix::QMatrix(CMat data, std::vector<int> dims) : data_(std::move(data)), dims_(std::move(dims)) {
  if (data_.rows() != data_.cols()) throw InvalidArgument("QMatrix: matrix not square");
  for (int d : dims_)
    if (d < 1) throw InvalidArgument("QMatrix: factor dimension < 1");
  if (product(dims_) != data_.rows())
    throw InvalidArgument("QMatrix: product of dims " + std::to_string(product(dims_)) +
                          " != side " + std::to_string(data_.rows()));
}

QMatrix::QMatrix(CMat data) : QMatrix(data, {static_cast<int>(data.rows())}) {}

QMatrix QMatrix::identity(const std::vector<int>& dims) {
  int n = product(dims);
  return QMatrix(CMat::Identity(n, n), dims);
}

QMatrix QMatrix::zero(const std::vector<int>& dims) {
  int n = product(dims);
  return QMatrix(CMat::Zero(n, n), dims);
}

QMatrix QMatrix::projector(const CVec& psi, const std::vector<int>& dims) {
  return QMatrix(psi * psi.adjoint(), dims);
}

QMatrix QMatrix::adjoint() const { return QMatrix(data_.adjoint(), dims_); }

double QMatrix::hermiticity_error() const {
  if (data_.size() == 0) return 0.0;
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
  require_same(*this, o, "operator+");
  data_ += o.data_;
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& o) {
  require_same(*this, o, "operator-");
  data_ -= o.data_;
  return *this;
}

QMatrix& QMatrix::operator*=(cplx z) {
  data_ *= z;
  return *this;
}

QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  require_same(a, b, "operator*");
  return QMatrix(a.mat() * b.mat(), a.dims());
}

QMatrix operator*(cplx z, QMatrix a) { return a *= z; }
QMatrix operator*(double x, QMatrix a) { return a *= cplx(x, 0.0); }

QMatrix kron(const QMatrix& a, const QMatrix& b) {
  const CMat& A = a.mat();
  const CMat& B = b.mat();
  const Eigen::Index nb = B.rows();
  CMat out(A.rows() * nb, A.cols() * nb);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * nb, j * nb, nb, nb) = A(i, j) * B;
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return QMatrix(std::move(out), std::move(dims));
}

QMatrix kron(std::initializer_list<QMatrix> factors) {
  if (factors.size() == 0) throw InvalidArgument("kron: empty factor list");
  auto it = factors.begin();
  QMatrix out = *it;
  for (++it; it != factors.end(); ++it) out = kron(out, *it);
  return out;
}

QMatrix embed(const QMatrix& op, int index, const std::vector<int>& dims) {
  if (index < 0 || index >= static_cast<int>(dims.size()))
    throw InvalidArgument("embed: factor index out of range");
  if (op.size() != dims[index]) throw InvalidArgument("embed: operator size does not match factor");
  int left = 1, right = 1;
  for (int k = 0; k < index; ++k) left *= dims[k];
  for (int k = index + 1; k < static_cast<int>(dims.size()); ++k) right *= dims[k];
  CMat m = kron(kron(QMatrix(CMat::Identity(left, left)), QMatrix(op.mat())),
                QMatrix(CMat::Identity(right, right)))
               .mat();
  return QMatrix(std::move(m), dims);
}

QMatrix partial_trace(const QMatrix& rho, const std::vector<int>& keep) {
  const auto& dims = rho.dims();
  const int nf = static_cast<int>(dims.size());
  std::vector<bool> kept(nf, false);
  for (int k : keep) {
    if (k < 0 || k >= nf) throw InvalidArgument("partial_trace: subsystem index out of range");
    if (kept[k]) throw InvalidArgument("partial_trace: repeated subsystem index");
    kept[k] = true;
  }
  for (std::size_t i = 1; i < keep.size(); ++i)
    if (keep[i] < keep[i - 1]) throw InvalidArgument("partial_trace: keep must be ascending");

  std::vector<int> kdims;
  for (int k : keep) kdims.push_back(dims[k]);
  const int nk = product(kdims);
  const int n = rho.size();

  // strides of the row-major multi-index (factor 0 most significant)
  std::vector<int> stride(nf, 1);
  for (int k = nf - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];

  CMat out = CMat::Zero(nk, nk);
  std::vector<int> digits(nf);
  for (int r = 0; r < n; ++r) {
    int rem = r;
    for (int k = 0; k < nf; ++k) {
      digits[k] = rem / stride[k];
      rem %= stride[k];
    }
    // kept index of r and the traced part of r
    int kr = 0, traced = 0;
    for (int k = 0; k < nf; ++k) {
      if (kept[k])
        kr = kr * dims[k] + digits[k];
      else
        traced = traced * dims[k] + digits[k];
    }
    for (int c = 0; c < n; ++c) {
      int remc = c, kc = 0, tc = 0;
      for (int k = 0; k < nf; ++k) {
        int dgt = remc / stride[k];
        remc %= stride[k];
        if (kept[k])
          kc = kc * dims[k] + dgt;
        else
          tc = tc * dims[k] + dgt;
      }
      if (tc == traced) out(kr, kc) += rho.mat()(r, c);
    }
  }
  return QMatrix(std::move(out), kdims.empty() ? std::vector<int>{1} : kdims);
}

namespace {

std::string density_problem(const QMatrix& rho, const DensityTolerance& tol) {
  if (rho.size() == 0) return "empty matrix";
  double tr_err = std::abs(rho.trace() - cplx(1.0, 0.0));
  if (tr_err > tol.trace) return "trace differs from 1 by " + std::to_string(tr_err);
  double herm = rho.hermiticity_error();
  if (herm > tol.hermitian) return "not Hermitian (error " + std::to_string(herm) + ")";
  Eigen::SelfAdjointEigenSolver<CMat> es(rho.mat(), Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  if (lmin < -tol.negative) return "negative eigenvalue " + std::to_string(lmin);
  return {};
}

}  // namespace

void require_density(const QMatrix& rho, const DensityTolerance& tol) {
  auto msg = density_problem(rho, tol);
  if (!msg.empty()) throw InvalidArgument("invalid density matrix: " + msg);
}

bool is_density(const QMatrix& rho, const DensityTolerance& tol) {
  return density_problem(rho, tol).empty();
}

QMatrix normalize_density(const QMatrix& rho) {
  CMat h = 0.5 * (rho.mat() + rho.mat().adjoint());
  cplx tr = h.trace();
  if (std::abs(tr) == 0.0) throw NumericError("normalize_density: zero trace");
  h /= tr.real();
  return QMatrix(std::move(h), rho.dims());
}

double trace_distance(const QMatrix& a, const QMatrix& b) {
  CMat d = a.mat() - b.mat();
  CMat h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace ops {

QMatrix lowering() {
  CMat m = CMat::Zero(2, 2);
  m(1, 0) = 1.0;
  return QMatrix(m, {2});
}

QMatrix raising() { return lowering().adjoint(); }

QMatrix pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return QMatrix(m, {2});
}

QMatrix pauli_y() {
  CMat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return QMatrix(m, {2});
}

QMatrix pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return QMatrix(m, {2});
}

QMatrix destroy(int n) {
  if (n < 1) throw InvalidArgument("destroy: dimension < 1");
  CMat m = CMat::Zero(n, n);
  for (int k = 1; k < n; ++k) m(k - 1, k) = std::sqrt(static_cast<double>(k));
  return QMatrix(m, {n});
}

QMatrix number(int n) {
  CMat m = CMat::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
  return QMatrix(m, {n});
}

QMatrix eye(int n) { return QMatrix::identity({n}); }

CVec basis(int n, int k) {
  CVec v = CVec::Zero(n);
  v(k) = 1.0;
  return v;
}

}  // namespace ops

}  // namespace thz
