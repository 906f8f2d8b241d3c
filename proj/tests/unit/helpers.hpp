#pragma once

#include <cmath>
#include <random>

#include "thz/qmatrix.hpp"

namespace testutil {

using thz::CMat;
using thz::cplx;

inline CMat random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

// Random full-rank density matrix G G^dag / tr.
inline CMat random_density(int n, std::mt19937_64& rng) {
  CMat g = random_matrix(n, rng);
  CMat r = g * g.adjoint();
  return r / r.trace().real();
}

inline CMat random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMat> qr(random_matrix(n, rng));
  return qr.householderQ() * CMat::Identity(n, n);
}

inline double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testutil
