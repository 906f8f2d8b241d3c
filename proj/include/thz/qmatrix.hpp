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

#include <complex>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace thz {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Dense operator on a tensor-product Hilbert space. dims lists the factor
// dimensions (emitter 1, emitter 2, cavity, ...) and their product is the
// matrix side length.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(CMat data, std::vector<int> dims);
  explicit QMatrix(CMat data);

  static QMatrix identity(const std::vector<int>& dims);
  static QMatrix zero(const std::vector<int>& dims);
  static QMatrix projector(const CVec& psi, const std::vector<int>& dims);

  const CMat& mat() const { return data_; }
  CMat& mat() { return data_; }
  const std::vector<int>& dims() const { return dims_; }
  int size() const { return static_cast<int>(data_.rows()); }

  QMatrix adjoint() const;
  cplx trace() const { return data_.trace(); }
  // max |A - A^dag|
  double hermiticity_error() const;
  bool same_space(const QMatrix& other) const { return dims_ == other.dims_; }

  QMatrix& operator+=(const QMatrix& o);
  QMatrix& operator-=(const QMatrix& o);
  QMatrix& operator*=(cplx z);

 private:
  CMat data_;
  std::vector<int> dims_;
};

QMatrix operator+(QMatrix a, const QMatrix& b);
QMatrix operator-(QMatrix a, const QMatrix& b);
QMatrix operator*(const QMatrix& a, const QMatrix& b);
QMatrix operator*(cplx z, QMatrix a);
QMatrix operator*(double x, QMatrix a);

QMatrix kron(const QMatrix& a, const QMatrix& b);
QMatrix kron(std::initializer_list<QMatrix> factors);

// op acting on factor `index` of `dims`, identity on the others.
QMatrix embed(const QMatrix& op, int index, const std::vector<int>& dims);

QMatrix partial_trace(const QMatrix& rho, const std::vector<int>& keep);

// Density-matrix checks: trace 1, Hermitian, no eigenvalue below -tol_neg.
struct DensityTolerance {
  double trace = 1e-10;
  double hermitian = 1e-10;
  double negative = 1e-8;
};
void require_density(const QMatrix& rho, const DensityTolerance& tol = {});
bool is_density(const QMatrix& rho, const DensityTolerance& tol = {});

// (rho + rho^dag)/2 scaled to unit trace.
QMatrix normalize_density(const QMatrix& rho);

double trace_distance(const QMatrix& a, const QMatrix& b);

namespace ops {
// Two-level convention: index 0 = upper (|e>, |+>), index 1 = lower.
QMatrix lowering();  // |1><0|
QMatrix raising();
QMatrix pauli_x();
QMatrix pauli_y();
QMatrix pauli_z();  // diag(+1, -1)
QMatrix destroy(int n);
QMatrix number(int n);
QMatrix eye(int n);
// Basis vector |k> of dimension n.
CVec basis(int n, int k);
}  // namespace ops

}  // namespace thz
